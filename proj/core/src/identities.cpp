#include "nctorus/identities.hpp"

#include <algorithm>
#include <cmath>

#include "nctorus/lattice.hpp"

namespace nctorus {

bool IdentityReport::passed(double tolerance) const {
    return trace_derivative < tolerance && partial_integration < tolerance && leibniz < tolerance &&
           star_derivation < tolerance && inverse < tolerance && cyclicity < tolerance && positivity >= 0.0;
}

IdentityReport calculus_identities(const AlgebraElement& h) {
    IdentityReport out;
    const AlgebraElement& f = h;
    const AlgebraElement g = f * f;
    const double nf = norm(f);
    const double ng = norm(g);
    const double nfg = std::max(nf * ng, 1e-300);

    Matrix weight = Matrix::Zero(f.dimension(), f.dimension());
    Matrix weight_inv = weight;
    for (long k = 0; k < f.dimension(); ++k) {
        const double w = 2.0 + std::cos(f.matrix()(k, k).real());
        weight(k, k) = w;
        weight_inv(k, k) = 1.0 / w;
    }
    const AlgebraElement u = magnetic_translation(f.geometry(), f.flux(), {1, 0, 0});
    const AlgebraElement z = u * f.with_matrix(weight);
    const AlgebraElement z_inv = f.with_matrix(weight_inv) * adjoint(u);
    const double nz = norm(z_inv);

    Matrix shifted = f.matrix();
    shifted.diagonal().array() += Complex(0.0, 1.0);
    const AlgebraElement r = f.with_matrix(shifted.inverse());
    const AlgebraElement r_star = adjoint(r);
    const double nr = norm(r);

    for (int j = 0; j < 3; ++j) {
        const AlgebraElement df = derive(f, j);
        const AlgebraElement dg = derive(g, j);
        out.trace_derivative = std::max(out.trace_derivative, std::abs(trace_per_volume(df)) / std::max(nf, 1e-300));
        out.partial_integration = std::max(
            out.partial_integration,
            std::abs(trace_product_per_volume(df, g) + trace_product_per_volume(f, dg)) / nfg);
        out.leibniz = std::max(out.leibniz, leibniz_defect(f, g, j) / nfg);
        out.star_derivation =
            std::max(out.star_derivation, norm(derive(adjoint(f), j) - adjoint(df)) / std::max(nf, 1e-300));
        const AlgebraElement dz = derive(z, j);
        out.inverse = std::max(out.inverse, norm(derive(z_inv, j) + z_inv * dz * z_inv) / nz);
        out.parity_probe = std::max(
            out.parity_probe,
            std::abs(trace_product_per_volume(derive(r_star, j), r) + trace_product_per_volume(r_star, derive(r, j))) /
                (nr * nr));
    }
    out.cyclicity = std::abs(trace_product_per_volume(f, g) - trace_product_per_volume(g, f)) / nfg;
    const double pf = trace_product_per_volume(adjoint(f), f).real();
    const double pg = trace_product_per_volume(adjoint(g), g).real();
    out.positivity = std::min(pf, pg) / std::max({pf, pg, 1e-300});
    return out;
}

}  // namespace nctorus
