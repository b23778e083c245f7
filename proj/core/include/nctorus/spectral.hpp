#pragma once

#include <utility>

#include <Eigen/Dense>

#include "nctorus/algebra.hpp"

namespace nctorus {

/// Full eigendecomposition h = V diag(E) V^dagger of a Hermitian element.
struct SpectralData {
    TorusGeometry geometry;
    FluxTensor flux;
    Eigen::VectorXd eigenvalues;  ///< ascending
    Matrix eigenvectors;          ///< columns, phase fixed
    double fermi_level = 0.0;

    /// Number of eigenvalues below the Fermi level.
    long occupied() const;
    /// Distance between the lowest level above and the highest level below
    /// the Fermi level, 0 if one side is empty.
    double gap() const;
};

struct SpectralOptions {
    /// Eigenvalues closer than this to the Fermi level count as gapless.
    double exclusion_window = 1e-10;
};

/// Hermitian diagonalization (LAPACK zheevr). Each eigenvector is rotated so
/// that its first entry of largest modulus is real and positive; columns
/// inside an exactly degenerate cluster are sorted lexicographically.
SpectralData diagonalize(const AlgebraElement& h, double fermi_level);

/// Throws GapClosedError when an eigenvalue is within the window of the Fermi level.
void require_gapped(const SpectralData& spectrum, const SpectralOptions& options = {});

AlgebraElement fermi_projector(const SpectralData& spectrum, const SpectralOptions& options = {});
AlgebraElement fermi_projector(const AlgebraElement& h, double fermi_level, const SpectralOptions& options = {});

/// chi(h - e_F) = 1 - 2p.
AlgebraElement sign_function(const SpectralData& spectrum, const SpectralOptions& options = {});
AlgebraElement sign_function(const AlgebraElement& h, double fermi_level, const SpectralOptions& options = {});

double spectral_gap(const AlgebraElement& h, double fermi_level);

enum class ProjectorSide {
    below,  ///< p, the occupied projector
    above,  ///< 1 - p
};

struct ItoOptions {
    ProjectorSide side = ProjectorSide::below;
    /// Explicit field derivative of the Hamiltonian element. Only needed for
    /// hoppings that depend on B themselves; leave empty otherwise.
    const AlgebraElement* explicit_field_derivative = nullptr;
    SpectralOptions spectral;
};

/// delta_j of the spectral projector of h on the chosen side of the Fermi
/// level, from the residues of the resolvent expression
/// (i/2) R [d_{j+1}h R, d_{j+2}h R], R = (h - z)^-1. Only triples straddling
/// the gap contribute.
AlgebraElement ito_projector_offdiag(const AlgebraElement& h, const SpectralData& spectrum, int axis,
                                     const ItoOptions& options = {});
AlgebraElement ito_projector_offdiag(const AlgebraElement& h, double fermi_level, int axis,
                                     const ItoOptions& options = {});

/// d_j p from first-order perturbation theory, sum over occupied o and empty u
/// of |u><u| d_j h |o><o| / (E_o - E_u) plus its adjoint. On a finite torus
/// this differs from derive(p, j) by wrap-around terms that decay with the
/// extents, because derive obeys the Leibniz rule only up to such terms.
AlgebraElement resolvent_derivative_projector(const AlgebraElement& h, const SpectralData& spectrum, int axis,
                                              const SpectralOptions& options = {});

/// (-i/2) p [d_{j+1}p, d_{j+2}p] p and (+i/2) (1-p) [d_{j+1}p, d_{j+2}p] (1-p),
/// with d = derive.
std::pair<AlgebraElement, AlgebraElement> ito_projector_diag(const AlgebraElement& p, int axis);
/// Same blocks for caller-supplied d_{j+1}p and d_{j+2}p.
std::pair<AlgebraElement, AlgebraElement> ito_projector_diag(const AlgebraElement& p, const AlgebraElement& d1p,
                                                             const AlgebraElement& d2p);

/// Residual ||p p - p|| in the scaled Frobenius norm.
double idempotency_defect(const AlgebraElement& p);

}  // namespace nctorus
