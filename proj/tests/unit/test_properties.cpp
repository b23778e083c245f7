#include <doctest.h>

#include <cmath>
#include <random>

#include "nctorus/bloch.hpp"
#include "nctorus/lattice.hpp"
#include "nctorus/spectral.hpp"
#include "oracles.hpp"

using namespace nctorus;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Weak random hopping on top of a +-2 level splitting: gapped at zero.
HoppingTable gapped_table(std::uint64_t seed) {
    HoppingTable t = oracle::random_table(2, 1, seed).scaled(0.02);
    OrbitalMatrix split = OrbitalMatrix::Zero(2, 2);
    split(0, 0) = 2.0;
    split(1, 1) = -2.0;
    t.add({0, 0, 0}, split);
    return t;
}

}  // namespace

TEST_CASE("algebra identities hold for random short-range elements") {
    const TorusGeometry g({9, 7, 5}, 2);
    for (std::uint64_t seed = 100; seed < 106; ++seed) {
        CAPTURE(seed);
        const AlgebraElement f = oracle::random_short_range(g, 1, seed);
        const AlgebraElement k = oracle::random_short_range(g, 1, seed + 1000);
        const double scale = norm(f) * norm(k);
        CHECK(max_abs(adjoint(adjoint(f)).matrix() - f.matrix()) == 0.0);
        CHECK(norm(adjoint(f * k) - adjoint(k) * adjoint(f)) < 1e-13 * scale);
        CHECK(std::abs(trace_per_volume(f * k) - trace_per_volume(k * f)) < 1e-13 * scale);
        CHECK(std::abs(trace_product_per_volume(f, k) - trace_per_volume(f * k)) < 1e-13 * scale);
        CHECK(trace_per_volume(adjoint(f) * f).real() > 0.0);
        for (int j = 0; j < 3; ++j) {
            CHECK(std::abs(trace_per_volume(derive(f, j))) < 1e-14 * norm(f));
            CHECK(std::abs(trace_per_volume(derive(f, j) * k) + trace_per_volume(f * derive(k, j))) < 1e-13 * scale);
            CHECK(leibniz_defect(f, k, j) < 1e-13 * scale);
            CHECK(norm(derive(adjoint(f), j) - adjoint(derive(f, j))) < 1e-14 * norm(f));
            CHECK(max_abs(derive(f, j).matrix() - oracle::derive_reference(f, j)) < 1e-15 * max_abs(f.matrix()) * 10);
        }
    }
}

TEST_CASE("random hopping tables reproduce their Bloch spectra and stay covariant") {
    for (std::uint64_t seed = 200; seed < 204; ++seed) {
        CAPTURE(seed);
        const HoppingTable t = oracle::random_table(2, 1, seed);
        const TorusGeometry g({5, 3, 3}, 2);
        const auto h = build_hamiltonian({g, t, FluxTensor{}, DisorderSpec{}});
        Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix(), Eigen::EigenvaluesOnly);
        const auto ref = oracle::bloch_spectrum(t, g.extents());
        for (std::size_t k = 0; k < ref.size(); ++k)
            CHECK(std::abs(es.eigenvalues()(static_cast<Eigen::Index>(k)) - ref[k]) < 1e-12);

        const TorusGeometry g2({5, 5, 5}, 2);
        const LatticeModel m{g2, t, FluxTensor::from_numerators(g2, {static_cast<long>(seed % 3), 1, -1}),
                             DisorderSpec{0.5, seed, 0}};
        CHECK(covariance_defect(m, {1, 2, 3}) < 1e-13);
    }
}

TEST_CASE("Fermi projectors of random gapped Hamiltonians") {
    const TorusGeometry g({5, 5, 3}, 2);
    for (std::uint64_t seed = 300; seed < 304; ++seed) {
        CAPTURE(seed);
        const LatticeModel m{g, gapped_table(seed), FluxTensor::from_numerators(g, {0, 0, static_cast<long>(seed % 2)}),
                             DisorderSpec{0.2, seed, 1}};
        const AlgebraElement h = build_hamiltonian(m);
        const SpectralData s = diagonalize(h, 0.0);
        REQUIRE(s.gap() > 1.0);
        const AlgebraElement p = fermi_projector(s);
        CHECK(idempotency_defect(p) < 1e-12);
        CHECK(max_abs(p.matrix() - p.matrix().adjoint()) < 1e-12);
        CHECK(std::abs(trace_per_volume(p) - Complex(1.0)) < 1e-12);
        ItoOptions above;
        above.side = ProjectorSide::above;
        for (int j = 0; j < 3; ++j) {
            const Matrix d = ito_projector_offdiag(h, s, j).matrix();
            CHECK(max_abs(d - d.adjoint()) < 1e-12);
            CHECK(max_abs(ito_projector_offdiag(h, s, j, above).matrix() + d) < 1e-12);
            const Matrix dp = resolvent_derivative_projector(h, s, j).matrix();
            // d(p^2) = d p: p dp + dp p = dp.
            CHECK(max_abs(p.matrix() * dp + dp * p.matrix() - dp) < 1e-12);
        }
    }
}
