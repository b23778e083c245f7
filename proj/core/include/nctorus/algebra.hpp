#pragma once

#include <complex>

#include <Eigen/Dense>

#include "nctorus/geometry.hpp"

namespace nctorus {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
/// D x D block acting on the orbitals of one site.
using OrbitalMatrix = Eigen::MatrixXcd;

/// Finite-volume image of a covariant observable: one dense matrix over the
/// (site, orbital) basis of a torus, tagged with the geometry and the flux it
/// was built for. Instances are never mutated after construction.
class AlgebraElement {
public:
    AlgebraElement(TorusGeometry geometry, FluxTensor flux, Matrix matrix);

    static AlgebraElement identity(const TorusGeometry& geometry, const FluxTensor& flux);
    static AlgebraElement zero(const TorusGeometry& geometry, const FluxTensor& flux);

    const TorusGeometry& geometry() const { return geometry_; }
    const FluxTensor& flux() const { return flux_; }
    const Matrix& matrix() const { return matrix_; }
    long dimension() const { return static_cast<long>(matrix_.rows()); }

    /// Same tags, different matrix.
    AlgebraElement with_matrix(Matrix matrix) const;

private:
    TorusGeometry geometry_;
    FluxTensor flux_;
    Matrix matrix_;
};

enum class NormKind {
    scaled_frobenius,  ///< ||f||_F / sqrt(dimension)
    spectral,          ///< largest singular value
};

/// Throws TagMismatchError unless both operands share geometry and flux.
void require_same_tags(const AlgebraElement& f, const AlgebraElement& g);

AlgebraElement multiply(const AlgebraElement& f, const AlgebraElement& g);
AlgebraElement adjoint(const AlgebraElement& f);
AlgebraElement commutator(const AlgebraElement& f, const AlgebraElement& g);
AlgebraElement anticommutator(const AlgebraElement& f, const AlgebraElement& g);

AlgebraElement operator+(const AlgebraElement& f, const AlgebraElement& g);
AlgebraElement operator-(const AlgebraElement& f, const AlgebraElement& g);
AlgebraElement operator-(const AlgebraElement& f);
AlgebraElement operator*(const AlgebraElement& f, const AlgebraElement& g);
AlgebraElement operator*(Complex s, const AlgebraElement& f);

/// Trace divided by the number of lattice sites.
Complex trace_per_volume(const AlgebraElement& f);

/// trace_per_volume(f * g) without forming the product.
Complex trace_product_per_volume(const AlgebraElement& f, const AlgebraElement& g);

/// (d_j f)_{xy} = i w(y_j - x_j) f_{xy}, with w the periodic weight. This is
/// -i [X_j, f] for the periodic-distance position operator. `axis` is 0, 1 or 2.
AlgebraElement derive(const AlgebraElement& f, int axis);

double norm(const AlgebraElement& f, NormKind kind = NormKind::scaled_frobenius);

/// Norm of d_j(f g) - d_j(f) g - f d_j(g).
double leibniz_defect(const AlgebraElement& f, const AlgebraElement& g, int axis,
                      NormKind kind = NormKind::scaled_frobenius);

inline int next_axis(int axis, int step) { return (axis + step) % 3; }

}  // namespace nctorus
