#include "nctorus/algebra.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "nctorus/error.hpp"

namespace nctorus {

namespace {

void require_axis(int axis) {
    if (axis < 0 || axis > 2) throw InvalidInputError("axis must be 0, 1 or 2, got " + std::to_string(axis));
}

}  // namespace

AlgebraElement::AlgebraElement(TorusGeometry geometry, FluxTensor flux, Matrix matrix)
    : geometry_(geometry), flux_(flux), matrix_(std::move(matrix)) {
    const long n = geometry_.dimension();
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw InvalidInputError("matrix is " + std::to_string(matrix_.rows()) + "x" +
                                std::to_string(matrix_.cols()) + " but the torus has dimension " +
                                std::to_string(n));
    }
}

AlgebraElement AlgebraElement::identity(const TorusGeometry& geometry, const FluxTensor& flux) {
    return {geometry, flux, Matrix::Identity(geometry.dimension(), geometry.dimension())};
}

AlgebraElement AlgebraElement::zero(const TorusGeometry& geometry, const FluxTensor& flux) {
    return {geometry, flux, Matrix::Zero(geometry.dimension(), geometry.dimension())};
}

AlgebraElement AlgebraElement::with_matrix(Matrix matrix) const { return {geometry_, flux_, std::move(matrix)}; }

void require_same_tags(const AlgebraElement& f, const AlgebraElement& g) {
    if (!(f.geometry() == g.geometry())) throw TagMismatchError("operands live on different tori");
    if (!(f.flux() == g.flux())) throw TagMismatchError("operands carry different magnetic fluxes");
}

AlgebraElement multiply(const AlgebraElement& f, const AlgebraElement& g) {
    require_same_tags(f, g);
    Matrix product = f.matrix() * g.matrix();
    return f.with_matrix(std::move(product));
}

AlgebraElement adjoint(const AlgebraElement& f) { return f.with_matrix(f.matrix().adjoint()); }

AlgebraElement commutator(const AlgebraElement& f, const AlgebraElement& g) {
    require_same_tags(f, g);
    Matrix c = f.matrix() * g.matrix();
    c.noalias() -= g.matrix() * f.matrix();
    return f.with_matrix(std::move(c));
}

AlgebraElement anticommutator(const AlgebraElement& f, const AlgebraElement& g) {
    require_same_tags(f, g);
    Matrix c = f.matrix() * g.matrix();
    c.noalias() += g.matrix() * f.matrix();
    return f.with_matrix(std::move(c));
}

AlgebraElement operator+(const AlgebraElement& f, const AlgebraElement& g) {
    require_same_tags(f, g);
    return f.with_matrix(f.matrix() + g.matrix());
}

AlgebraElement operator-(const AlgebraElement& f, const AlgebraElement& g) {
    require_same_tags(f, g);
    return f.with_matrix(f.matrix() - g.matrix());
}

AlgebraElement operator-(const AlgebraElement& f) { return f.with_matrix(-f.matrix()); }

AlgebraElement operator*(const AlgebraElement& f, const AlgebraElement& g) { return multiply(f, g); }

AlgebraElement operator*(Complex s, const AlgebraElement& f) { return f.with_matrix(s * f.matrix()); }

Complex trace_per_volume(const AlgebraElement& f) {
    return f.matrix().trace() / static_cast<double>(f.geometry().sites());
}

Complex trace_product_per_volume(const AlgebraElement& f, const AlgebraElement& g) {
    require_same_tags(f, g);
    // tr(FG) = sum_ij F_ij G_ji
    const Complex t = f.matrix().cwiseProduct(g.matrix().transpose()).sum();
    return t / static_cast<double>(f.geometry().sites());
}

AlgebraElement derive(const AlgebraElement& f, int axis) {
    require_axis(axis);
    const TorusGeometry& geom = f.geometry();
    const int D = geom.orbitals();
    const int L = geom.extent(axis);
    const long n = f.dimension();

    std::vector<int> coord(static_cast<std::size_t>(n));
    for (long x = 0; x < n; ++x) coord[static_cast<std::size_t>(x)] = geom.site_coords(x / D)[static_cast<std::size_t>(axis)];

    // Weight table indexed by (y_j - x_j) + L - 1.
    std::vector<double> weight(static_cast<std::size_t>(2 * L - 1));
    for (int d = -(L - 1); d <= L - 1; ++d) weight[static_cast<std::size_t>(d + L - 1)] = periodic_weight(d, L);

    Matrix out(n, n);
    const Matrix& m = f.matrix();
    for (long y = 0; y < n; ++y) {
        const int cy = coord[static_cast<std::size_t>(y)];
        for (long x = 0; x < n; ++x) {
            const double w = weight[static_cast<std::size_t>(cy - coord[static_cast<std::size_t>(x)] + L - 1)];
            const Complex v = m(x, y);
            out(x, y) = Complex(-w * v.imag(), w * v.real());
        }
    }
    return f.with_matrix(std::move(out));
}

double norm(const AlgebraElement& f, NormKind kind) {
    if (kind == NormKind::scaled_frobenius) {
        return f.matrix().norm() / std::sqrt(static_cast<double>(f.dimension()));
    }
    Eigen::BDCSVD<Matrix> svd(f.matrix());
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

double leibniz_defect(const AlgebraElement& f, const AlgebraElement& g, int axis, NormKind kind) {
    require_same_tags(f, g);
    const AlgebraElement lhs = derive(f * g, axis);
    Matrix defect = lhs.matrix();
    defect.noalias() -= derive(f, axis).matrix() * g.matrix();
    defect.noalias() -= f.matrix() * derive(g, axis).matrix();
    return norm(f.with_matrix(std::move(defect)), kind);
}

}  // namespace nctorus
