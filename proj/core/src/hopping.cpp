#include "nctorus/hopping.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "nctorus/error.hpp"

namespace nctorus {

namespace {

Displacement negate(const Displacement& d) { return {-d[0], -d[1], -d[2]}; }

bool is_origin(const Displacement& d) { return d[0] == 0 && d[1] == 0 && d[2] == 0; }

}  // namespace

bool lexicographically_positive(const Displacement& d) {
    for (int c : d) {
        if (c > 0) return true;
        if (c < 0) return false;
    }
    return false;
}

HoppingTable::HoppingTable(int orbitals) : orbitals_(orbitals) {
    if (orbitals_ < 1) throw InvalidInputError("hopping table needs at least one orbital");
}

void HoppingTable::add(const Displacement& d, const OrbitalMatrix& amplitude) {
    if (amplitude.rows() != orbitals_ || amplitude.cols() != orbitals_) {
        throw InvalidInputError("hopping amplitude must be " + std::to_string(orbitals_) + "x" +
                                std::to_string(orbitals_));
    }
    auto slot = [this](const Displacement& key) -> OrbitalMatrix& {
        auto it = entries_.find(key);
        if (it == entries_.end()) it = entries_.emplace(key, OrbitalMatrix::Zero(orbitals_, orbitals_)).first;
        return it->second;
    };
    if (is_origin(d)) {
        if ((amplitude - amplitude.adjoint()).cwiseAbs().maxCoeff() > 1e-14) {
            throw InvalidInputError("on-site amplitude must be Hermitian");
        }
        slot(d) += amplitude;
        return;
    }
    slot(d) += amplitude;
    slot(negate(d)) += amplitude.adjoint();
}

void HoppingTable::add_entry(const Displacement& d, int row, int col, Complex value) {
    OrbitalMatrix m = OrbitalMatrix::Zero(orbitals_, orbitals_);
    m(row, col) = value;
    if (is_origin(d) && row != col) {
        m(col, row) = std::conj(value);
    }
    add(d, m);
}

void HoppingTable::ensure_onsite() {
    entries_.try_emplace(Displacement{0, 0, 0}, OrbitalMatrix::Zero(orbitals_, orbitals_));
}

int HoppingTable::range() const {
    int r = 0;
    for (const auto& [d, t] : entries_) {
        for (int c : d) r = std::max(r, std::abs(c));
    }
    return r;
}

void HoppingTable::validate_range(const TorusGeometry& geometry) const {
    if (geometry.orbitals() != orbitals_) {
        throw InvalidInputError("hopping table has " + std::to_string(orbitals_) + " orbitals, torus has " +
                                std::to_string(geometry.orbitals()));
    }
    for (const auto& [d, t] : entries_) {
        for (int j = 0; j < 3; ++j) {
            if (2 * std::abs(d[static_cast<std::size_t>(j)]) >= geometry.extent(j)) {
                throw InvalidInputError("hopping displacement component " + std::to_string(d[static_cast<std::size_t>(j)]) +
                                        " along axis " + std::to_string(j + 1) + " is not below half the extent " +
                                        std::to_string(geometry.extent(j)));
            }
        }
    }
}

double HoppingTable::closure_defect() const {
    double defect = 0.0;
    for (const auto& [d, t] : entries_) {
        auto it = entries_.find(negate(d));
        if (it == entries_.end()) {
            defect = std::max(defect, t.cwiseAbs().maxCoeff());
            continue;
        }
        defect = std::max(defect, (it->second - t.adjoint()).cwiseAbs().maxCoeff());
    }
    return defect;
}

std::vector<Displacement> HoppingTable::canonical_displacements() const {
    std::vector<Displacement> out;
    for (const auto& [d, t] : entries_) {
        if (is_origin(d) || lexicographically_positive(d)) out.push_back(d);
    }
    return out;
}

HoppingTable HoppingTable::scaled(double factor) const {
    HoppingTable out(orbitals_);
    for (const auto& [d, t] : entries_) out.entries_.emplace(d, factor * t);
    return out;
}

HoppingTable HoppingTable::transformed(const std::function<OrbitalMatrix(const OrbitalMatrix&)>& f) const {
    HoppingTable out(orbitals_);
    for (const auto& [d, t] : entries_) out.entries_.emplace(d, f(t));
    return out;
}

double HoppingTable::max_difference(const HoppingTable& a, const HoppingTable& b) {
    if (a.orbitals_ != b.orbitals_) return std::numeric_limits<double>::infinity();
    const HoppingTable diff = interpolate(a, b.scaled(-1.0), 0.5);
    double out = 0.0;
    for (const auto& [d, t] : diff.entries_) out = std::max(out, 2.0 * t.cwiseAbs().maxCoeff());
    return out;
}

HoppingTable HoppingTable::interpolate(const HoppingTable& a, const HoppingTable& b, double s) {
    if (a.orbitals_ != b.orbitals_) throw InvalidInputError("cannot interpolate tables with different orbital counts");
    HoppingTable out(a.orbitals_);
    for (const auto& [d, t] : a.entries_) out.entries_.emplace(d, (1.0 - s) * t);
    for (const auto& [d, t] : b.entries_) {
        auto it = out.entries_.find(d);
        if (it == out.entries_.end()) {
            out.entries_.emplace(d, s * t);
        } else {
            it->second += s * t;
        }
    }
    return out;
}

}  // namespace nctorus
