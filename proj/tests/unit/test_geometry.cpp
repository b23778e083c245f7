#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nctorus/error.hpp"
#include "nctorus/geometry.hpp"
#include "oracles.hpp"

using namespace nctorus;

TEST_CASE("rational numbers are kept in lowest terms") {
    CHECK(Rational(4, -6) == Rational(-2, 3));
    CHECK(Rational(0, 5) == Rational(0, 1));
    CHECK(Rational::parse("-6/4").to_string() == "-3/2");
    CHECK(Rational::parse("7") == Rational(7));
    CHECK_THROWS_AS(Rational::parse("1/0"), InvalidInputError);
    CHECK_THROWS_AS(Rational::parse("0.5"), InvalidInputError);
    CHECK((Rational(2, 9) * 9) == Rational(2));
}

TEST_CASE("geometry sizes and indexing") {
    const TorusGeometry g({5, 7, 3}, 2);
    CHECK(g.sites() == 105);
    CHECK(g.dimension() == 210);
    CHECK(g.odd_extents());
    CHECK_FALSE(TorusGeometry({5, 8, 3}, 1).odd_extents());
    for (long s = 0; s < g.sites(); ++s) CHECK(g.site_index(g.site_coords(s)) == s);
    CHECK(g.site_index({1, 0, 0}) == 1);
    CHECK(g.site_index({0, 1, 0}) == 5);
    CHECK(g.site_index({-1, 7, 3}) == g.site_index({4, 0, 0}));
    CHECK_THROWS_AS(TorusGeometry({2, 5, 5}, 1), InvalidInputError);
    CHECK_THROWS_AS(TorusGeometry({5, 5, 5}, 0), InvalidInputError);
}

TEST_CASE("periodic weight picks the minimal image with ties at +L/2") {
    for (int L : {3, 4, 5, 8, 9}) {
        for (int x = -2 * L; x <= 2 * L; ++x) CHECK(periodic_weight(x, L) == oracle::min_image(x, L));
    }
    CHECK(periodic_weight(2, 4) == 2);
    CHECK(periodic_weight(-2, 4) == 2);
    CHECK(periodic_weight(3, 5) == -2);
    // Antisymmetry holds for odd extents only.
    for (int x = 0; x < 9; ++x) CHECK(periodic_weight(-x, 9) == -periodic_weight(x, 9));
    CHECK(periodic_weight(-4, 8) != -periodic_weight(4, 8));
}

TEST_CASE("flux quanta are single valued") {
    const TorusGeometry g({9, 6, 4}, 1);
    CHECK(FluxTensor::quantum(g, 2) == Rational(2, 3));  // gcd(9, 6) = 3
    CHECK(FluxTensor::quantum(g, 0) == Rational(1));     // gcd(6, 4) = 2
    CHECK(FluxTensor::quantum(g, 1) == Rational(2));     // gcd(4, 9) = 1
    for (long n : {-2L, -1L, 1L, 3L}) {
        const FluxTensor b = FluxTensor::from_numerators(g, {n, n, n});
        CHECK_FALSE(b.admissibility_violation(g).has_value());
    }
    const FluxTensor bad(std::array<Rational, 3>{Rational(0), Rational(0), Rational(1, 9)});
    REQUIRE(bad.admissibility_violation(g).has_value());
    CHECK(bad.admissibility_violation(g)->find("B_3") != std::string::npos);
}

TEST_CASE("Peierls phase of a single hop") {
    // (n, B m) with n = (1,0,0), m = (0,1,0) and only B_3 set gives B_3.
    const double b3 = 2.0 / 9.0;
    const FluxTensor b(std::array<Rational, 3>{Rational(0), Rational(0), Rational(2, 9)});
    const auto z = b.phase({1, 0, 0}, {0, 1, 0});
    CHECK(std::abs(z - std::polar(1.0, std::numbers::pi * b3)) < 1e-15);
    CHECK(std::abs(b.phase({0, 1, 0}, {1, 0, 0}) - std::conj(z)) < 1e-15);
    CHECK(std::abs(b.phase({2, 0, 5}, {2, 0, 5}) - 1.0) < 1e-15);
}
