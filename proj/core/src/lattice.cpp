#include "nctorus/lattice.hpp"

#include "nctorus/error.hpp"

namespace nctorus {

AlgebraElement build_hamiltonian(const LatticeModel& model, const BuildOptions& options) {
    const TorusGeometry& geom = model.geometry;
    if (options.enforce_admissibility) {
        if (auto violation = model.flux.admissibility_violation(geom)) {
            throw InvalidInputError("inadmissible flux: " + *violation);
        }
    }
    model.hoppings.validate_range(geom);

    const int D = geom.orbitals();
    const long n_sites = geom.sites();
    const OrbitalMatrix unit = OrbitalMatrix::Identity(D, D);
    const double lambda = model.disorder.strength;
    const auto bonds = model.hoppings.canonical_displacements();

    Matrix h = Matrix::Zero(geom.dimension(), geom.dimension());
    for (long site = 0; site < n_sites; ++site) {
        const Coords m = geom.site_coords(site);
        for (const Displacement& d : bonds) {
            const OrbitalMatrix& t = model.hoppings.entries().at(d);
            OrbitalMatrix amplitude = t;
            if (model.disorder.active()) amplitude += lambda * bond_disorder(model.disorder, geom, m, d) * unit;

            const Coords n{m[0] + d[0], m[1] + d[1], m[2] + d[2]};
            const long target = geom.site_index(n);
            const Complex phase = model.flux.phase(n, m);
            if (target == site && d == Displacement{0, 0, 0}) {
                h.block(site * D, site * D, D, D) += amplitude;
                continue;
            }
            const OrbitalMatrix forward = phase * amplitude;
            h.block(target * D, site * D, D, D) += forward;
            h.block(site * D, target * D, D, D) += forward.adjoint();
        }
    }
    return {geom, model.flux, std::move(h)};
}

AlgebraElement magnetic_translation(const TorusGeometry& geometry, const FluxTensor& flux, const Coords& a) {
    const int D = geometry.orbitals();
    Matrix u = Matrix::Zero(geometry.dimension(), geometry.dimension());
    for (long site = 0; site < geometry.sites(); ++site) {
        const Coords n = geometry.site_coords(site);
        const long target = geometry.site_index({n[0] - a[0], n[1] - a[1], n[2] - a[2]});
        const Complex phase = flux.phase(a, n);
        for (int alpha = 0; alpha < D; ++alpha) u(target * D + alpha, site * D + alpha) = phase;
    }
    return {geometry, flux, std::move(u)};
}

double covariance_defect(const LatticeModel& model, const Coords& a, NormKind kind, const BuildOptions& options) {
    const AlgebraElement h = build_hamiltonian(model, options);
    const AlgebraElement u = magnetic_translation(model.geometry, model.flux, a);
    LatticeModel shifted = model;
    shifted.disorder = model.disorder.translated(a);
    const AlgebraElement h_shifted = build_hamiltonian(shifted, options);
    Matrix defect = u.matrix() * h.matrix() * u.matrix().adjoint();
    defect -= h_shifted.matrix();
    return norm(h.with_matrix(std::move(defect)), kind);
}

}  // namespace nctorus
