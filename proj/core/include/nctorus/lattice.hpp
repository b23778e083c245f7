#pragma once

#include "nctorus/algebra.hpp"
#include "nctorus/disorder.hpp"
#include "nctorus/hopping.hpp"

namespace nctorus {

/// Everything needed to assemble one disordered, magnetically twisted
/// Hamiltonian on the torus.
struct LatticeModel {
    TorusGeometry geometry;
    HoppingTable hoppings;
    FluxTensor flux;
    DisorderSpec disorder;
};

struct BuildOptions {
    /// Reject fluxes that make the Peierls phases multivalued. Only switched
    /// off to construct counterexamples.
    bool enforce_admissibility = true;
};

/// H = sum_{m,d} e^{i pi (m + d, B m)} (t_d + lambda omega_{m,m+d}) |m + d><m|,
/// with m in the fundamental domain and m + d unwrapped. Every bond is
/// assembled once and mirrored, so the result is Hermitian exactly.
AlgebraElement build_hamiltonian(const LatticeModel& model, const BuildOptions& options = {});

/// U_a |n, alpha> = e^{i pi (a, B n)} |n - a, alpha>, indices modulo the extents.
AlgebraElement magnetic_translation(const TorusGeometry& geometry, const FluxTensor& flux, const Coords& a);

/// ||U_a h(omega) U_a^dagger - h(t_a omega)||; zero up to rounding for
/// admissible fluxes.
double covariance_defect(const LatticeModel& model, const Coords& a, NormKind kind = NormKind::scaled_frobenius,
                         const BuildOptions& options = {});

}  // namespace nctorus
