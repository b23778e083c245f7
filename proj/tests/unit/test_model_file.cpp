#include <doctest.h>

#include <string>

#include "nctorus/error.hpp"
#include "nctorus/fixtures.hpp"
#include "nctorus/lattice.hpp"
#include "nctorus/model_file.hpp"
#include "oracles.hpp"

using namespace nctorus;

namespace {

bool same(const ModelDefinition& a, const ModelDefinition& b) {
    return a.name == b.name && a.orbitals == b.orbitals && HoppingTable::max_difference(a.hoppings, b.hoppings) == 0.0 &&
           a.extents == b.extents &&
           a.flux_numerators == b.flux_numerators && a.disorder == b.disorder &&
           a.symmetry.spin_rotation == b.symmetry.spin_rotation &&
           a.symmetry.inversion_orbital == b.symmetry.inversion_orbital;
}

}  // namespace

TEST_CASE("minimal model file") {
    const auto m = parse_model(
        "format = nctorus-model/1\n"
        "# a chain\n"
        "name = chain\n"
        "orbitals = 1\n"
        "extents = 5 3 3\n"
        "hop = 1 0 0 0 0 -1 0\n");
    CHECK(m.name == "chain");
    CHECK(m.orbitals == 1);
    REQUIRE(m.extents.has_value());
    CHECK(*m.extents == Coords{5, 3, 3});
    CHECK(m.hoppings.entries().size() == 2);
    CHECK(m.hoppings.entries().at({-1, 0, 0})(0, 0) == Complex(-1.0, 0.0));
    CHECK(m.symmetry.spin_rotation.isIdentity(0.0));
    CHECK(!m.disorder.active());
}

TEST_CASE("write and parse round trip") {
    ModelDefinition m;
    m.name = "random";
    m.orbitals = 2;
    m.hoppings = oracle::random_table(2, 1, 77);
    m.extents = Coords{7, 5, 3};
    m.flux_numerators = {1, 0, -2};
    m.disorder = DisorderSpec{0.123456789012345, 42, 3};
    m.symmetry = reference_model("stacked_chern").symmetry;
    const std::string text = write_model(m);
    const ModelDefinition back = parse_model(text);
    CHECK(same(m, back));
    CHECK(write_model(back) == text);
}

TEST_CASE("reference families round trip through the file format") {
    for (const ModelFamily& family : reference_models()) {
        ModelDefinition m;
        m.name = family.name;
        m.orbitals = family.orbitals;
        m.hoppings = family.hoppings();
        m.symmetry = family.symmetry;
        CHECK(same(m, parse_model(write_model(m))));
    }
}

TEST_CASE("shipped stacked_chern model matches the built-in family") {
    const ModelDefinition m = load_model(std::string(NCTORUS_TEST_MODEL_DIR) + "/stacked_chern.model");
    const ModelFamily& family = reference_model("stacked_chern");
    CHECK(m.orbitals == 2);
    CHECK(HoppingTable::max_difference(m.hoppings, family.hoppings()) == 0.0);
    CHECK(m.symmetry.inversion_orbital == family.symmetry.inversion_orbital);
}

TEST_CASE("malformed model files report the line") {
    const auto fails_on_line = [](const std::string& text, int line) {
        try {
            parse_model(text);
        } catch (const ConfigError& e) {
            return std::string(e.what()).find("line " + std::to_string(line)) != std::string::npos;
        }
        return false;
    };
    const std::string head = "format = nctorus-model/1\norbitals = 2\n";
    CHECK(fails_on_line("format = something/2\n", 1));
    CHECK(fails_on_line(head + "hop = 1 0 0 0 0\n", 3));
    CHECK(fails_on_line(head + "hop = 1 0 0 2 0 1 0\n", 3));
    CHECK(fails_on_line(head + "colour = blue\n", 3));
    CHECK(fails_on_line(head + "extents = 5 5\n", 3));
    CHECK(fails_on_line(head + "hop = 1 0 0 0 0 abc 0\n", 3));
    CHECK(fails_on_line(head + "no equals sign\n", 3));
    CHECK_THROWS_AS(parse_model("orbitals = 1\n"), ConfigError);
    CHECK_THROWS_AS(load_model("/nonexistent/file.model"), IoError);
}

TEST_CASE("model file symmetry must be unitary") {
    const std::string text =
        "format = nctorus-model/1\norbitals = 2\nhop = 1 0 0 0 0 1 0\nsymmetry.inversion = 0 0 2 0\n";
    CHECK_THROWS_AS(parse_model(text), ConfigError);
}
