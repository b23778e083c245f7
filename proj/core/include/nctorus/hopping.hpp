#pragma once

#include <functional>
#include <map>
#include <vector>

#include "nctorus/algebra.hpp"
#include "nctorus/geometry.hpp"

namespace nctorus {

using Displacement = Coords;

/// Translation-invariant hopping amplitudes t_d, d = n - m, for a Hamiltonian
/// sum_{n,m} t_{n-m} |n><m|. The table is closed under Hermitian conjugation:
/// every d is stored together with -d and t_{-d} = t_d^dagger.
class HoppingTable {
public:
    explicit HoppingTable(int orbitals);

    int orbitals() const { return orbitals_; }

    /// Adds `amplitude` to t_d and its conjugate transpose to t_{-d}. For d = 0
    /// the amplitude must be Hermitian.
    void add(const Displacement& d, const OrbitalMatrix& amplitude);

    /// Convenience for a single matrix element of t_d.
    void add_entry(const Displacement& d, int row, int col, Complex value);

    /// Adds t_0 (a zero matrix when absent), so on-site disorder has a bond to
    /// attach to.
    void ensure_onsite();

    const std::map<Displacement, OrbitalMatrix>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    /// max over entries of max_j |d_j|.
    int range() const;

    /// Throws InvalidInputError when some entry reaches half of an extent.
    void validate_range(const TorusGeometry& geometry) const;

    /// Hermiticity-closure residual max_d ||t_{-d} - t_d^dagger||_max.
    double closure_defect() const;

    /// Entries with d lexicographically >= 0: one representative per bond.
    std::vector<Displacement> canonical_displacements() const;

    /// Same displacement set, amplitudes multiplied by `factor`.
    HoppingTable scaled(double factor) const;

    /// Same displacement set, each amplitude replaced by f(t_d). The caller
    /// keeps f compatible with Hermitian conjugation.
    HoppingTable transformed(const std::function<OrbitalMatrix(const OrbitalMatrix&)>& f) const;

    /// Entrywise (1 - s) * a + s * b over the union of displacement sets.
    static HoppingTable interpolate(const HoppingTable& a, const HoppingTable& b, double s);

    /// max_d ||a_d - b_d||_max over the union of displacement sets.
    static double max_difference(const HoppingTable& a, const HoppingTable& b);

private:
    int orbitals_;
    std::map<Displacement, OrbitalMatrix> entries_;
};

bool lexicographically_positive(const Displacement& d);

}  // namespace nctorus
