#include "nctorus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "nctorus/error.hpp"

extern "C" void openblas_set_num_threads(int);

namespace nctorus {

namespace {

// Thread-level parallelism belongs to the caller; single-threaded BLAS keeps
// every eigensolve bitwise reproducible.
void pin_blas_threads() {
    static std::once_flag once;
    std::call_once(once, [] { openblas_set_num_threads(1); });
}

void fix_phases(Matrix& v) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            const double a = std::abs(v(r, c));
            if (a > best_abs * (1.0 + 1e-12)) {
                best_abs = a;
                best = r;
            }
        }
        if (best_abs > 0.0) v.col(c) *= std::conj(v(best, c)) / best_abs;
    }
}

bool column_less(const Matrix& v, Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
        const Complex x = v(r, a);
        const Complex y = v(r, b);
        if (x.real() != y.real()) return x.real() < y.real();
        if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
    return false;
}

void sort_degenerate_clusters(Eigen::VectorXd& e, Matrix& v) {
    const Eigen::Index n = e.size();
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index stop = start + 1;
        while (stop < n && e(stop) - e(stop - 1) <= 1e-12 * std::max(1.0, std::abs(e(stop)))) ++stop;
        if (stop - start > 1) {
            std::vector<Eigen::Index> order(static_cast<std::size_t>(stop - start));
            std::iota(order.begin(), order.end(), start);
            std::stable_sort(order.begin(), order.end(),
                             [&](Eigen::Index a, Eigen::Index b) { return column_less(v, a, b); });
            Matrix block(v.rows(), stop - start);
            for (std::size_t k = 0; k < order.size(); ++k) block.col(static_cast<Eigen::Index>(k)) = v.col(order[k]);
            v.middleCols(start, stop - start) = block;
        }
        start = stop;
    }
}

AlgebraElement from_spectrum(const SpectralData& s, Matrix m) { return {s.geometry, s.flux, std::move(m)}; }

}  // namespace

long SpectralData::occupied() const {
    long count = 0;
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
        if (eigenvalues(k) < fermi_level) ++count;
    }
    return count;
}

double SpectralData::gap() const {
    const long occ = occupied();
    if (occ == 0 || occ == eigenvalues.size()) return 0.0;
    return eigenvalues(occ) - eigenvalues(occ - 1);
}

SpectralData diagonalize(const AlgebraElement& h, double fermi_level) {
    pin_blas_threads();
    const lapack_int n = static_cast<lapack_int>(h.dimension());
    Matrix a = h.matrix();
    Eigen::VectorXd w(n);
    Matrix z(n, n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'A', 'L', n, a.data(), n, 0.0, 0.0, 0, 0, 0.0,
                                           &found, w.data(), z.data(), n, support.data());
    if (info != 0 || found != n) throw Error("zheevr failed with info " + std::to_string(info));
    fix_phases(z);
    sort_degenerate_clusters(w, z);
    return {h.geometry(), h.flux(), std::move(w), std::move(z), fermi_level};
}

void require_gapped(const SpectralData& s, const SpectralOptions& options) {
    for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
        if (std::abs(s.eigenvalues(k) - s.fermi_level) <= options.exclusion_window) {
            throw GapClosedError("eigenvalue " + std::to_string(s.eigenvalues(k)) + " sits at the Fermi level " +
                                     std::to_string(s.fermi_level),
                                 s.eigenvalues(k));
        }
    }
}

AlgebraElement fermi_projector(const SpectralData& s, const SpectralOptions& options) {
    require_gapped(s, options);
    const long occ = s.occupied();
    const auto v = s.eigenvectors.leftCols(occ);
    Matrix p = v * v.adjoint();
    return from_spectrum(s, std::move(p));
}

AlgebraElement fermi_projector(const AlgebraElement& h, double fermi_level, const SpectralOptions& options) {
    return fermi_projector(diagonalize(h, fermi_level), options);
}

AlgebraElement sign_function(const SpectralData& s, const SpectralOptions& options) {
    AlgebraElement p = fermi_projector(s, options);
    Matrix chi = -2.0 * p.matrix();
    chi.diagonal().array() += 1.0;
    return p.with_matrix(std::move(chi));
}

AlgebraElement sign_function(const AlgebraElement& h, double fermi_level, const SpectralOptions& options) {
    return sign_function(diagonalize(h, fermi_level), options);
}

double spectral_gap(const AlgebraElement& h, double fermi_level) { return diagonalize(h, fermi_level).gap(); }

AlgebraElement ito_projector_offdiag(const AlgebraElement& h, const SpectralData& s, int axis,
                                     const ItoOptions& options) {
    require_gapped(s, options.spectral);
    const long n = h.dimension();
    const long occ = s.occupied();
    const bool below = options.side == ProjectorSide::below;
    const long n_in = below ? occ : n - occ;
    const long n_out = n - n_in;

    // Basis ordered as [in-set | out-set]; the in-set carries Phi = 1.
    Matrix v(n, n);
    Eigen::VectorXd e(n);
    if (below) {
        v = s.eigenvectors;
        e = s.eigenvalues;
    } else {
        v.leftCols(n_in) = s.eigenvectors.rightCols(n_in);
        v.rightCols(n_out) = s.eigenvectors.leftCols(n_out);
        e.head(n_in) = s.eigenvalues.tail(n_in);
        e.tail(n_out) = s.eigenvalues.head(n_out);
    }
    if (n_in == 0 || n_out == 0) return AlgebraElement::zero(h.geometry(), h.flux());

    Eigen::MatrixXd inv_gap(n_in, n_out);  // 1 / (E_in - E_out)
    for (long u = 0; u < n_out; ++u) {
        for (long o = 0; o < n_in; ++o) inv_gap(o, u) = 1.0 / (e(o) - e(n_in + u));
    }
    const Eigen::MatrixXd inv_gap_t = inv_gap.transpose();

    const auto rotate = [&](const AlgebraElement& f) {
        Matrix tmp = f.matrix() * v;
        Matrix out = v.adjoint() * tmp;
        return out;
    };
    const Matrix a = rotate(derive(h, next_axis(axis, 1)));
    const Matrix b = rotate(derive(h, next_axis(axis, 2)));

    // Sum_l Phi[E_m, E_l, E_n] X_ml Y_ln for the step function Phi, block by block.
    const auto residue_sum = [&](const Matrix& x, const Matrix& y) {
        const auto x_oo = x.topLeftCorner(n_in, n_in);
        const auto x_uu = x.bottomRightCorner(n_out, n_out);
        const Matrix x_ou = x.topRightCorner(n_in, n_out).cwiseProduct(inv_gap.cast<Complex>());
        const Matrix x_uo = x.bottomLeftCorner(n_out, n_in).cwiseProduct(inv_gap_t.cast<Complex>());
        const auto y_oo = y.topLeftCorner(n_in, n_in);
        const auto y_uu = y.bottomRightCorner(n_out, n_out);
        const Matrix y_ou = y.topRightCorner(n_in, n_out).cwiseProduct(inv_gap.cast<Complex>());
        const Matrix y_uo = y.bottomLeftCorner(n_out, n_in).cwiseProduct(inv_gap_t.cast<Complex>());

        Matrix k(n, n);
        k.topLeftCorner(n_in, n_in).noalias() = -(x_ou * y_uo);
        Matrix ou = x_ou * y_uu;
        ou.noalias() -= x_oo * y_ou;
        k.topRightCorner(n_in, n_out) = ou.cwiseProduct(inv_gap.cast<Complex>());
        Matrix uo = x_uu * y_uo;
        uo.noalias() -= x_uo * y_oo;
        k.bottomLeftCorner(n_out, n_in) = uo.cwiseProduct(inv_gap_t.cast<Complex>());
        k.bottomRightCorner(n_out, n_out).noalias() = x_uo * y_ou;
        return k;
    };

    Matrix delta = residue_sum(a, b);
    delta -= residue_sum(b, a);
    delta *= Complex(0.0, 0.5);

    if (options.explicit_field_derivative != nullptr) {
        require_same_tags(h, *options.explicit_field_derivative);
        const Matrix dh = rotate(*options.explicit_field_derivative);
        delta.topRightCorner(n_in, n_out) += dh.topRightCorner(n_in, n_out).cwiseProduct(inv_gap.cast<Complex>());
        delta.bottomLeftCorner(n_out, n_in) +=
            dh.bottomLeftCorner(n_out, n_in).cwiseProduct(inv_gap_t.cast<Complex>());
    }

    Matrix tmp = v * delta;
    Matrix out = tmp * v.adjoint();
    return h.with_matrix(std::move(out));
}

AlgebraElement ito_projector_offdiag(const AlgebraElement& h, double fermi_level, int axis,
                                     const ItoOptions& options) {
    return ito_projector_offdiag(h, diagonalize(h, fermi_level), axis, options);
}

double idempotency_defect(const AlgebraElement& p) {
    Matrix d = p.matrix() * p.matrix();
    d -= p.matrix();
    return norm(p.with_matrix(std::move(d)));
}

AlgebraElement resolvent_derivative_projector(const AlgebraElement& h, const SpectralData& s, int axis,
                                              const SpectralOptions& options) {
    require_gapped(s, options);
    const long n = h.dimension();
    const long occ = s.occupied();
    if (occ == 0 || occ == n) return AlgebraElement::zero(h.geometry(), h.flux());
    const Matrix& v = s.eigenvectors;
    Matrix tmp = derive(h, axis).matrix() * v;
    Matrix a = v.adjoint() * tmp;
    Matrix d = Matrix::Zero(n, n);
    for (long u = occ; u < n; ++u) {
        for (long o = 0; o < occ; ++o) {
            const double inv = 1.0 / (s.eigenvalues(o) - s.eigenvalues(u));
            d(o, u) = a(o, u) * inv;
            d(u, o) = a(u, o) * inv;
        }
    }
    tmp.noalias() = v * d;
    Matrix out = tmp * v.adjoint();
    return h.with_matrix(std::move(out));
}

std::pair<AlgebraElement, AlgebraElement> ito_projector_diag(const AlgebraElement& p, int axis) {
    return ito_projector_diag(p, derive(p, next_axis(axis, 1)), derive(p, next_axis(axis, 2)));
}

std::pair<AlgebraElement, AlgebraElement> ito_projector_diag(const AlgebraElement& p, const AlgebraElement& d1p,
                                                             const AlgebraElement& d2p) {
    const double defect = idempotency_defect(p);
    if (defect > 1e-10) throw InvalidInputError("element is not idempotent (defect " + std::to_string(defect) + ")");
    const AlgebraElement c = commutator(d1p, d2p);
    Matrix q = -p.matrix();
    q.diagonal().array() += 1.0;

    Matrix tmp = p.matrix() * c.matrix();
    Matrix inner = tmp * p.matrix();
    inner *= Complex(0.0, -0.5);
    tmp.noalias() = q * c.matrix();
    Matrix outer = tmp * q;
    outer *= Complex(0.0, 0.5);
    return {p.with_matrix(std::move(inner)), p.with_matrix(std::move(outer))};
}

}  // namespace nctorus
