#pragma once

#include "nctorus/algebra.hpp"

namespace nctorus {

/// Orbital parts of time reversal and inversion.
struct SymmetrySpec {
    /// e^{i pi s_y}; the identity for spinless models.
    OrbitalMatrix spin_rotation;
    /// Orbital unitary accompanying n -> -n.
    OrbitalMatrix inversion_orbital;

    static SymmetrySpec trivial(int orbitals);
    void validate(int orbitals) const;
};

/// (Theta f)_{xy} = S conj(f_{xy}) S^dagger blockwise, S = spin_rotation.
/// Defined at zero flux only.
AlgebraElement time_reversal(const AlgebraElement& f, const SymmetrySpec& symmetry);

/// (I f)_{n,m} = P f_{-n,-m} P^dagger blockwise, P = inversion_orbital.
AlgebraElement inversion(const AlgebraElement& f, const SymmetrySpec& symmetry);

}  // namespace nctorus
