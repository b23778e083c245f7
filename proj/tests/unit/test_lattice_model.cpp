#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "nctorus/error.hpp"
#include "nctorus/fixtures.hpp"
#include "nctorus/lattice.hpp"
#include "nctorus/symmetry.hpp"
#include "oracles.hpp"

using namespace nctorus;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<double> eigenvalues(const AlgebraElement& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix(), Eigen::EigenvaluesOnly);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

}  // namespace

TEST_CASE("hopping tables are closed under conjugation") {
    const HoppingTable t = oracle::random_table(2, 1, 5);
    CHECK(t.closure_defect() == 0.0);
    CHECK(t.range() == 1);
    for (const auto& [d, m] : t.entries()) {
        const Displacement minus{-d[0], -d[1], -d[2]};
        REQUIRE(t.entries().count(minus) == 1);
        CHECK(max_abs(t.entries().at(minus) - m.adjoint()) == 0.0);
    }
    HoppingTable bad(1);
    CHECK_THROWS_AS(bad.add({0, 0, 0}, OrbitalMatrix::Constant(1, 1, Complex(0.0, 1.0))), InvalidInputError);
}

TEST_CASE("range and displacement ties are rejected") {
    HoppingTable t(1);
    t.add({2, 0, 0}, OrbitalMatrix::Constant(1, 1, 1.0));
    CHECK_NOTHROW(t.validate_range(TorusGeometry({5, 3, 3}, 1)));
    CHECK_THROWS_AS(t.validate_range(TorusGeometry({4, 3, 3}, 1)), InvalidInputError);  // tie at L/2
    CHECK_THROWS_AS(t.validate_range(TorusGeometry({3, 3, 3}, 1)), InvalidInputError);
    CHECK_THROWS_AS(build_hamiltonian({TorusGeometry({4, 3, 3}, 1), t, FluxTensor{}, DisorderSpec{}}), InvalidInputError);
}

TEST_CASE("clean cubic spectrum equals the plane-wave spectrum") {
    const TorusGeometry g({5, 5, 5}, 1);
    const HoppingTable table = reference_model("cubic").hoppings();
    const auto real_space = eigenvalues(build_hamiltonian({g, table, FluxTensor{}, DisorderSpec{}}));
    std::vector<double> expected;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
            for (int c = 0; c < 5; ++c)
                expected.push_back(2.0 * (std::cos(2 * std::numbers::pi * a / 5) + std::cos(2 * std::numbers::pi * b / 5) +
                                          std::cos(2 * std::numbers::pi * c / 5)));
    std::sort(expected.begin(), expected.end());
    REQUIRE(real_space.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) CHECK(std::abs(real_space[k] - expected[k]) < 1e-12);
}

TEST_CASE("Peierls phase on a single bond") {
    const TorusGeometry g({9, 9, 3}, 1);
    HoppingTable t(1);
    t.add({1, -1, 0}, OrbitalMatrix::Constant(1, 1, 1.0));
    const FluxTensor b = FluxTensor::from_numerators(g, {0, 0, 1});  // B_3 = 2/9
    const auto h = build_hamiltonian({g, t, b, DisorderSpec{}});
    // m = (0,1,0) -> n = (1,0,0): multiplier exp(i pi B_3).
    const Complex z = h.matrix()(g.site_index({1, 0, 0}), g.site_index({0, 1, 0}));
    CHECK(std::abs(z - std::polar(1.0, std::numbers::pi * 2.0 / 9.0)) < 1e-15);
}

TEST_CASE("disordered Hamiltonians are Hermitian and reproducible") {
    const TorusGeometry g({5, 5, 5}, 4);
    const LatticeModel model{g, reference_model("qhz").hoppings(), FluxTensor::from_numerators(g, {1, 0, 1}),
                             DisorderSpec{0.3, 1234, 2}};
    const auto h1 = build_hamiltonian(model);
    const auto h2 = build_hamiltonian(model);
    CHECK(max_abs(h1.matrix() - h1.matrix().adjoint()) < 1e-15);
    CHECK(h1.matrix() == h2.matrix());
    LatticeModel other = model;
    other.disorder.realization = 3;
    CHECK(max_abs(build_hamiltonian(other).matrix() - h1.matrix()) > 1e-3);
}

TEST_CASE("bond disorder values are uniform and bond-local") {
    const TorusGeometry g({7, 7, 7}, 1);
    const DisorderSpec d{1.0, 99, 0};
    double lo = 1.0, hi = -1.0, sum = 0.0;
    long count = 0;
    for (long s = 0; s < g.sites(); ++s) {
        for (int j = 0; j < 3; ++j) {
            Coords e{0, 0, 0};
            e[static_cast<std::size_t>(j)] = 1;
            const double w = bond_disorder(d, g, g.site_coords(s), e);
            lo = std::min(lo, w);
            hi = std::max(hi, w);
            sum += w;
            ++count;
        }
    }
    CHECK(lo >= -0.5);
    CHECK(hi < 0.5);
    CHECK(std::abs(sum / count) < 0.05);
    CHECK(d.translated({1, 2, 3}).shift == Coords{1, 2, 3});
}

TEST_CASE("magnetic translations") {
    const TorusGeometry g({7, 7, 7}, 2);
    const FluxTensor b = FluxTensor::from_numerators(g, {1, -1, 2});
    const Matrix one = Matrix::Identity(g.dimension(), g.dimension());
    CHECK(max_abs(magnetic_translation(g, b, {0, 0, 0}).matrix() - one) == 0.0);
    for (const Coords& a : {Coords{1, 0, 0}, Coords{0, 2, -1}, Coords{3, 1, 1}}) {
        const Matrix u = magnetic_translation(g, b, a).matrix();
        CHECK(max_abs(u * u.adjoint() - one) < 1e-15);
    }
}

TEST_CASE("covariance under magnetic translations") {
    const TorusGeometry g({7, 7, 7}, 2);
    const HoppingTable table = oracle::random_table(2, 1, 17);
    for (const std::array<long, 3>& n : {std::array<long, 3>{0, 0, 0}, {0, 0, 1}, {1, 2, -1}}) {
        const LatticeModel clean{g, table, FluxTensor::from_numerators(g, n), DisorderSpec{}};
        for (const Coords& a : {Coords{1, 0, 0}, Coords{0, 1, 0}, Coords{2, -1, 3}}) CHECK(covariance_defect(clean, a) < 1e-13);
        LatticeModel dirty = clean;
        dirty.disorder = DisorderSpec{0.7, 5, 1};
        CHECK(covariance_defect(dirty, {1, 1, 0}) < 1e-13);
        CHECK(covariance_defect(dirty, {0, 0, 5}) < 1e-13);
    }
    // B_3 = 1/7 is not an even multiple of 1/L: the phases jump across the seam.
    const FluxTensor bad(std::array<Rational, 3>{Rational(0), Rational(0), Rational(1, 7)});
    const LatticeModel broken{g, table, bad, DisorderSpec{}};
    CHECK_THROWS_AS(build_hamiltonian(broken), InvalidInputError);
    BuildOptions lax;
    lax.enforce_admissibility = false;
    CHECK(covariance_defect(broken, {1, 0, 0}, NormKind::scaled_frobenius, lax) > 0.1);
    CHECK(covariance_defect(broken, {0, 1, 0}, NormKind::scaled_frobenius, lax) > 0.1);
}

TEST_CASE("field derivative of the twisted product") {
    // For interior sites, d/dB_3 of e^{-i pi (x, B y)} (F G)_{xy} at B = 0 is
    // -2 pi (i/2) (d_1 F d_2 G - d_2 F d_1 G)_{xy}.
    const TorusGeometry g({9, 9, 9}, 1);
    const HoppingTable tf = oracle::random_table(1, 1, 41);
    const HoppingTable tg = oracle::random_table(1, 1, 42);
    BuildOptions lax;
    lax.enforce_admissibility = false;
    const Rational small(1, 1000000);
    const FluxTensor b(std::array<Rational, 3>{Rational(0), Rational(0), small});
    const auto f0 = build_hamiltonian({g, tf, FluxTensor{}, DisorderSpec{}});
    const auto g0 = build_hamiltonian({g, tg, FluxTensor{}, DisorderSpec{}});
    const Matrix p0 = f0.matrix() * g0.matrix();
    const Matrix pb = build_hamiltonian({g, tf, b, DisorderSpec{}}, lax).matrix() *
                      build_hamiltonian({g, tg, b, DisorderSpec{}}, lax).matrix();
    const Matrix rhs = Complex(0.0, -std::numbers::pi) * (derive(f0, 0).matrix() * derive(g0, 1).matrix() -
                                                          derive(f0, 1).matrix() * derive(g0, 0).matrix());
    double worst = 0.0, scale = 0.0;
    for (long x = 0; x < g.sites(); ++x) {
        const Coords cx = g.site_coords(x);
        if (*std::min_element(cx.begin(), cx.end()) < 3 || *std::max_element(cx.begin(), cx.end()) > 5) continue;
        for (long y = 0; y < g.sites(); ++y) {
            const Coords cy = g.site_coords(y);
            const Complex fd = (std::conj(b.phase(cx, cy)) * pb(x, y) - p0(x, y)) / small.to_double();
            worst = std::max(worst, std::abs(fd - rhs(x, y)));
            scale = std::max(scale, std::abs(rhs(x, y)));
        }
    }
    CHECK(scale > 0.1);
    CHECK(worst < 1e-4 * scale);
}

TEST_CASE("time reversal") {
    const TorusGeometry g({5, 5, 5}, 4);
    const ModelFamily& qhz = reference_model("qhz");
    const AlgebraElement one = AlgebraElement::identity(g, FluxTensor{});
    CHECK(max_abs(time_reversal(one, qhz.symmetry).matrix() - one.matrix()) < 1e-15);

    const auto h = build_hamiltonian({g, qhz.hoppings(), FluxTensor{}, DisorderSpec{}});
    CHECK(max_abs(time_reversal(h, qhz.symmetry).matrix() - h.matrix()) < 1e-13);
    const auto hb = build_hamiltonian({g, qhz.hoppings({{"beta", 0.5}}), FluxTensor{}, DisorderSpec{}});
    CHECK(max_abs(time_reversal(hb, qhz.symmetry).matrix() - hb.matrix()) > 0.1);

    const AlgebraElement f = oracle::random_short_range(g, 1, 31);
    const AlgebraElement k = oracle::random_short_range(g, 1, 32);
    for (int j = 0; j < 3; ++j)
        CHECK(max_abs(derive(time_reversal(f, qhz.symmetry), j).matrix() + time_reversal(derive(f, j), qhz.symmetry).matrix()) < 1e-13);
    const double scale = norm(f) * norm(k);
    CHECK(norm(time_reversal(f * k, qhz.symmetry) - time_reversal(f, qhz.symmetry) * time_reversal(k, qhz.symmetry)) < 1e-13 * scale);
    // e^{i pi s_y} squares to -1: Theta^2 = 1 on the element level.
    CHECK(max_abs(time_reversal(time_reversal(f, qhz.symmetry), qhz.symmetry).matrix() - f.matrix()) < 1e-14);

    const AlgebraElement twisted = AlgebraElement::identity(g, FluxTensor::from_numerators(g, {0, 0, 1}));
    CHECK_THROWS_AS(time_reversal(twisted, qhz.symmetry), InvalidInputError);
    SymmetrySpec broken = qhz.symmetry;
    broken.spin_rotation *= 2.0;
    CHECK_THROWS_AS(time_reversal(f, broken), InvalidInputError);
}

TEST_CASE("inversion") {
    const TorusGeometry g({5, 5, 5}, 1);
    const SymmetrySpec trivial = SymmetrySpec::trivial(1);
    const AlgebraElement f = oracle::random_short_range(g, 1, 51);
    CHECK(max_abs(inversion(inversion(f, trivial), trivial).matrix() - f.matrix()) == 0.0);
    const AlgebraElement onsite_uniform = f.with_matrix(Matrix::Identity(g.dimension(), g.dimension()) * 0.7);
    CHECK(max_abs(inversion(onsite_uniform, trivial).matrix() - onsite_uniform.matrix()) == 0.0);
    const auto h = build_hamiltonian({g, reference_model("cubic").hoppings(), FluxTensor{}, DisorderSpec{}});
    CHECK(max_abs(inversion(h, trivial).matrix() - h.matrix()) < 1e-13);

    const TorusGeometry g2({5, 5, 5}, 4);
    const ModelFamily& qhz = reference_model("qhz");
    const auto hq = build_hamiltonian({g2, qhz.hoppings(), FluxTensor{}, DisorderSpec{}});
    CHECK(max_abs(inversion(hq, qhz.symmetry).matrix() - hq.matrix()) < 1e-13);
    const AlgebraElement x = oracle::random_short_range(g2, 1, 52);
    const AlgebraElement y = oracle::random_short_range(g2, 1, 53);
    CHECK(max_abs(inversion(x * y, qhz.symmetry).matrix() - (inversion(x, qhz.symmetry) * inversion(y, qhz.symmetry)).matrix()) < 1e-13);
    for (int j = 0; j < 3; ++j)
        CHECK(max_abs(derive(inversion(x, qhz.symmetry), j).matrix() + inversion(derive(x, j), qhz.symmetry).matrix()) < 1e-13);
}
