#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>

namespace nctorus {

using Coords = std::array<int, 3>;

/// Exact rational number with a positive denominator, always in lowest terms.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1);

    /// Parses "p", "-p" or "p/q" (decimal digits only).
    static Rational parse(const std::string& text);

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_zero() const { return num == 0; }
    std::string to_string() const;

    friend bool operator==(const Rational&, const Rational&) = default;
};

Rational operator*(const Rational& a, std::int64_t k);

/// Finite three-torus of lattice sites with `orbitals` states per site.
///
/// Element indices are `site * orbitals + orbital`, and sites are numbered
/// with the first coordinate running fastest.
class TorusGeometry {
public:
    TorusGeometry(Coords extents, int orbitals);

    const Coords& extents() const { return extents_; }
    int extent(int axis) const { return extents_[static_cast<std::size_t>(axis)]; }
    int orbitals() const { return orbitals_; }
    long sites() const { return static_cast<long>(extents_[0]) * extents_[1] * extents_[2]; }
    long dimension() const { return sites() * orbitals_; }

    /// True iff every extent is odd; only then is the periodic position weight
    /// antisymmetric, which makes the vanishing-trace identities exact.
    bool odd_extents() const;

    long site_index(const Coords& n) const;
    Coords site_coords(long site) const;
    /// Reduces each coordinate into [0, L_j).
    Coords wrap(const Coords& n) const;

    friend bool operator==(const TorusGeometry&, const TorusGeometry&) = default;

private:
    Coords extents_;
    int orbitals_;
};

/// Representative of x modulo L in (-L/2, L/2].
int periodic_weight(int x, int extent);

/// Uniform magnetic field as the three independent components of the
/// antisymmetric tensor, in units of the flux quantum per plaquette.
class FluxTensor {
public:
    FluxTensor() = default;
    explicit FluxTensor(std::array<Rational, 3> components) : components_(components) {}

    /// Component k = 2 * numerator_k / gcd(L_i, L_j), {i, j} the other two axes:
    /// the smallest steps that keep all Peierls phases single valued.
    static FluxTensor from_numerators(const TorusGeometry& geometry, const std::array<long, 3>& numerators);
    static Rational quantum(const TorusGeometry& geometry, int axis);

    const std::array<Rational, 3>& components() const { return components_; }
    const Rational& component(int axis) const { return components_[static_cast<std::size_t>(axis)]; }
    bool is_zero() const;

    /// Returns a description of the first violated condition B_k L_i in 2Z
    /// (i != k), or nothing when the flux is admissible on `geometry`.
    std::optional<std::string> admissibility_violation(const TorusGeometry& geometry) const;

    /// exp(i pi (x, B y)) evaluated with exact rational reduction of the exponent.
    std::complex<double> phase(const Coords& x, const Coords& y) const;

    friend bool operator==(const FluxTensor&, const FluxTensor&) = default;

private:
    std::array<Rational, 3> components_{};
};

}  // namespace nctorus
