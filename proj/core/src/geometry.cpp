#include "nctorus/geometry.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include "nctorus/error.hpp"

namespace nctorus {

namespace {

std::int64_t parse_int(std::string_view text, const std::string& whole) {
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) {
        throw InvalidInputError("malformed rational '" + whole + "'");
    }
    return value;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw InvalidInputError("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const std::int64_t g = std::gcd(n, d);
    num = g == 0 ? 0 : n / g;
    den = g == 0 ? 1 : d / g;
}

Rational Rational::parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_int(text, text));
    return Rational(parse_int(std::string_view(text).substr(0, slash), text),
                    parse_int(std::string_view(text).substr(slash + 1), text));
}

std::string Rational::to_string() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational operator*(const Rational& a, std::int64_t k) { return Rational(a.num * k, a.den); }

TorusGeometry::TorusGeometry(Coords extents, int orbitals) : extents_(extents), orbitals_(orbitals) {
    for (int L : extents_) {
        if (L < 3) throw InvalidInputError("torus extents must be >= 3, got " + std::to_string(L));
    }
    if (orbitals_ < 1) throw InvalidInputError("orbital count must be positive");
}

bool TorusGeometry::odd_extents() const {
    return extents_[0] % 2 == 1 && extents_[1] % 2 == 1 && extents_[2] % 2 == 1;
}

long TorusGeometry::site_index(const Coords& n) const {
    const Coords w = wrap(n);
    return w[0] + static_cast<long>(extents_[0]) * (w[1] + static_cast<long>(extents_[1]) * w[2]);
}

Coords TorusGeometry::site_coords(long site) const {
    Coords n{};
    n[0] = static_cast<int>(site % extents_[0]);
    site /= extents_[0];
    n[1] = static_cast<int>(site % extents_[1]);
    n[2] = static_cast<int>(site / extents_[1]);
    return n;
}

Coords TorusGeometry::wrap(const Coords& n) const {
    Coords w{};
    for (std::size_t j = 0; j < 3; ++j) {
        const int L = extents_[j];
        w[j] = ((n[j] % L) + L) % L;
    }
    return w;
}

int periodic_weight(int x, int extent) {
    int r = ((x % extent) + extent) % extent;
    if (2 * r > extent) r -= extent;
    return r;
}

FluxTensor FluxTensor::from_numerators(const TorusGeometry& geometry, const std::array<long, 3>& numerators) {
    std::array<Rational, 3> c{};
    for (int k = 0; k < 3; ++k) c[static_cast<std::size_t>(k)] = quantum(geometry, k) * numerators[static_cast<std::size_t>(k)];
    return FluxTensor(c);
}

Rational FluxTensor::quantum(const TorusGeometry& geometry, int axis) {
    const int i = (axis + 1) % 3;
    const int j = (axis + 2) % 3;
    return Rational(2, std::gcd(geometry.extent(i), geometry.extent(j)));
}

bool FluxTensor::is_zero() const {
    return components_[0].is_zero() && components_[1].is_zero() && components_[2].is_zero();
}

std::optional<std::string> FluxTensor::admissibility_violation(const TorusGeometry& geometry) const {
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 3; ++i) {
            if (i == k) continue;
            const Rational product = component(k) * geometry.extent(i);
            if (product.den != 1 || product.num % 2 != 0) {
                return "B_" + std::to_string(k + 1) + " * L_" + std::to_string(i + 1) + " = " +
                       product.to_string() + " is not an even integer";
            }
        }
    }
    return std::nullopt;
}

std::complex<double> FluxTensor::phase(const Coords& x, const Coords& y) const {
    // (x, B y) = B . (x cross y)
    const std::array<std::int64_t, 3> cross{
        static_cast<std::int64_t>(x[1]) * y[2] - static_cast<std::int64_t>(x[2]) * y[1],
        static_cast<std::int64_t>(x[2]) * y[0] - static_cast<std::int64_t>(x[0]) * y[2],
        static_cast<std::int64_t>(x[0]) * y[1] - static_cast<std::int64_t>(x[1]) * y[0]};
    std::int64_t q = 1;
    for (const auto& c : components_) q = std::lcm(q, c.den);
    std::int64_t s = 0;
    for (std::size_t k = 0; k < 3; ++k) s += components_[k].num * (q / components_[k].den) * cross[k];
    // exponent = pi * s / q, reduced modulo 2 pi
    const std::int64_t period = 2 * q;
    s = ((s % period) + period) % period;
    if (s == 0) return {1.0, 0.0};
    if (2 * s == q) return {0.0, 1.0};
    if (s == q) return {-1.0, 0.0};
    if (2 * s == 3 * q) return {0.0, -1.0};
    return std::polar(1.0, std::numbers::pi * static_cast<double>(s) / static_cast<double>(q));
}

}  // namespace nctorus
