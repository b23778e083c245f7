#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nctorus/error.hpp"
#include "nctorus/model_file.hpp"
#include "nctorus/runner/config.hpp"
#include "nctorus/runner/runner.hpp"
#include "oracles.hpp"

using namespace nctorus;
using namespace nctorus::runner;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* kStackedConstant = R"({
  "schema": "nctorus.run/1",
  "task": "delta_alpha",
  "model": {"family": "stacked_chern", "parameters": {"m": 1.0}},
  "geometry": {"extents": [5, 5, 3]},
  "path": {"kind": "constant"},
  "sampling": {"intervals": 6},
  "ensemble": {"realizations": 3, "master_seed": 11, "disorder_strength": 0.4}
})";

const char* kPump = R"({
  "schema": "nctorus.run/1",
  "task": "polarization",
  "model": {"family": "rice_mele"},
  "geometry": {"extents": [5, 3, 3]},
  "path": {"kind": "loop", "x": "delta", "y": "u", "center": [0.0, 0.0], "radius": 1.0},
  "sampling": {"intervals": 12},
  "ensemble": {"realizations": 3, "master_seed": 5, "disorder_strength": 0.3},
  "axis": 1
})";

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("nctorus_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

RunConfig patched(const char* text, const json& patch) {
    json j = json::parse(text);
    j.merge_patch(patch);
    return parse_config(j.dump());
}

double observable(const ObservableRecord& r, const std::string& name) {
    for (const auto& [k, v] : r.observables)
        if (k == name) return v;
    FAIL("missing observable " << name);
    return 0.0;
}

bool config_error(const json& patch) {
    try {
        patched(kStackedConstant, patch);
    } catch (const ConfigError&) {
        return true;
    }
    return false;
}

}  // namespace

TEST_CASE("config validation") {
    CHECK_NOTHROW(parse_config(kStackedConstant));
    CHECK(config_error({{"schema", "nctorus.run/2"}}));
    CHECK(config_error({{"task", "magnetization"}}));
    CHECK(config_error({{"colour", "blue"}}));
    CHECK(config_error({{"model", {{"family", "graphene"}}}}));
    CHECK(config_error({{"model", {{"parameters", {{"mass", 1.0}}}}}}));
    CHECK(config_error({{"geometry", {{"extents", {5, 5}}}}}));
    CHECK(config_error({{"geometry", {{"extents", {40, 40, 3}}}}}));  // dense dimension limit
    CHECK(config_error({{"sampling", {{"intervals", 1}}}}));
    CHECK(config_error({{"sampling", {{"derivative_order", 3}}}}));
    CHECK(config_error({{"ensemble", {{"realizations", 0}}}}));
    CHECK(config_error({{"ensemble", {{"master_seed", -4}}}}));
    CHECK(config_error({{"axis", 4}}));
    CHECK(config_error({{"tolerance_profile", "lenient"}}));
    const json open_chern2 = json::parse(
        R"({"task": "chern2", "path": {"kind": "segments", "segments": [{"type": "linear", "from": {"m": 1.0}, "to": {"m": 1.5}}]}})");
    CHECK(config_error(open_chern2));
    CHECK(config_error({{"path", {{"kind", "spiral"}}}}));
    CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/run.json"), IoError);
}

TEST_CASE("flux numerators must keep the torus admissible") {
    // Numerators count flux quanta, so any integer is admissible.
    const RunConfig ok = patched(kStackedConstant, {{"flux", {0, 0, 1}}});
    CHECK(ok.flux_numerators[2] == 1);
    CHECK_THROWS_AS(patched(kStackedConstant, {{"task", "z2"}, {"flux", {0, 0, 1}}}), ConfigError);
}

TEST_CASE("config hash") {
    const RunConfig a = parse_config(kStackedConstant);
    const RunConfig b = patched(kStackedConstant, {{"workers", 2}, {"output", "/tmp/elsewhere"}});
    CHECK(a.hash().size() == 16);
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() == parse_config(a.canonical()).hash());
    CHECK(patched(kStackedConstant, {{"ensemble", {{"master_seed", 12}}}}).hash() != a.hash());
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("shipped configs parse and their canonical form is a fixed point") {
    int count = 0;
    for (const auto& e : fs::directory_iterator(NCTORUS_TEST_CONFIG_DIR)) {
        if (e.path().extension() != ".json") continue;
        CAPTURE(e.path().string());
        const RunConfig c = load_config(e.path());
        CHECK(parse_config(c.canonical()).hash() == c.hash());
        ++count;
    }
    CHECK(count >= 8);
}

TEST_CASE("even extents are flagged") {
    CHECK(parse_config(kStackedConstant).warnings().empty());
    CHECK(!patched(kStackedConstant, {{"geometry", {{"extents", {6, 5, 3}}}}}).warnings().empty());
}

TEST_CASE("constant path delta_alpha is zero for every realization") {
    const EnsembleResult r = run(parse_config(kStackedConstant));
    REQUIRE(r.complete);
    CHECK(r.exit_code == exit_ok);
    REQUIRE(r.records.size() == 3);
    for (const auto& rec : r.records) CHECK(observable(rec, "delta_alpha") == 0.0);
    for (std::size_t k = 0; k < r.summary.names.size(); ++k) {
        CHECK(r.summary.mean[k] == 0.0);
        CHECK(r.summary.standard_error[k] == 0.0);
    }
}

TEST_CASE("identities task on a random short-range model") {
    const fs::path dir = scratch_dir("identities");
    ModelDefinition m;
    m.name = "random";
    m.orbitals = 2;
    m.hoppings = oracle::random_table(2, 1, 99);
    m.symmetry = SymmetrySpec::trivial(2);
    std::ofstream(dir / "random.model") << write_model(m);
    json j = {{"schema", "nctorus.run/1"},
              {"task", "identities"},
              {"model", {{"file", "random.model"}}},
              // f h h has range 3, which must stay below L / 2
              {"geometry", {{"extents", {7, 7, 7}}}},
              {"ensemble", {{"realizations", 2}, {"master_seed", 3}, {"disorder_strength", 0.5}}}};
    const RunConfig c = parse_config(j.dump(), dir);
    const EnsembleResult r = run(c);
    REQUIRE(r.complete);
    for (const auto& rec : r.records) {
        for (const char* k : {"trace_derivative", "partial_integration", "leibniz", "star_derivation", "inverse", "cyclicity"})
            CHECK(observable(rec, k) < 1e-12);
        CHECK(observable(rec, "positivity") > 0.0);
        CHECK(rec.labels.front().second == "true");
    }
    CHECK(std::find(r.summary.names.begin(), r.summary.names.end(), "leibniz") != r.summary.names.end());
}

TEST_CASE("summary equals a recomputation from the records") {
    const EnsembleResult r = run(parse_config(kPump));
    REQUIRE(r.complete);
    REQUIRE(r.records.size() == 3);
    const EnsembleSummary again = summarize(r.records);
    CHECK(again.names == r.summary.names);
    CHECK(again.mean == r.summary.mean);
    CHECK(again.standard_error == r.summary.standard_error);
    // Independent recomputation of the first observable.
    const std::string name = r.summary.names.front();
    double sum = 0.0;
    for (const auto& rec : r.records) sum += observable(rec, name);
    const double mean = sum / 3.0;
    double ss = 0.0;
    for (const auto& rec : r.records) ss += (observable(rec, name) - mean) * (observable(rec, name) - mean);
    CHECK(r.summary.mean.front() == doctest::Approx(mean).epsilon(1e-14));
    CHECK(r.summary.standard_error.front() == doctest::Approx(std::sqrt(ss / 2.0 / 3.0)).epsilon(1e-12));
    // Different realizations see different disorder.
    CHECK(r.records[0].seed != r.records[1].seed);
}

TEST_CASE("outputs are bitwise reproducible and independent of the worker count") {
    const fs::path one = scratch_dir("workers1");
    const fs::path two = scratch_dir("workers2");
    const fs::path again = scratch_dir("workers1b");
    run(patched(kPump, {{"output", one.string()}, {"workers", 1}}));
    run(patched(kPump, {{"output", two.string()}, {"workers", 2}}));
    run(patched(kPump, {{"output", again.string()}, {"workers", 1}}));
    for (const char* f : {"summary.csv", "summary.json", "manifest.json", "realization_0000.json", "realization_0002.json"}) {
        CAPTURE(f);
        REQUIRE(fs::exists(one / f));
        CHECK(slurp(one / f) == slurp(again / f));
    }
    for (const char* f : {"summary.csv", "summary.json", "realization_0001.json"}) {
        CAPTURE(f);
        CHECK(slurp(one / f) == slurp(two / f));
    }
    CHECK(fs::exists(one / "timing.json"));
}

TEST_CASE("single realization parallelizes over path samples without changing results") {
    const RunConfig base = patched(kPump, {{"ensemble", {{"realizations", 1}}}});
    const EnsembleResult a = run(base);
    RunConfig wide = base;
    wide.workers = 3;
    const EnsembleResult b = run(wide);
    CHECK(to_json(a.records.front()) == to_json(b.records.front()));
}

TEST_CASE("result files carry the hash and the expected columns") {
    const fs::path dir = scratch_dir("columns");
    const RunConfig c = patched(kPump, {{"output", dir.string()}});
    const EnsembleResult r = run(c);
    std::istringstream csv(slurp(dir / "summary.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line.rfind("# nctorus ", 0) == 0);
    std::getline(csv, line);
    CHECK(line == "# config_hash " + c.hash());
    std::getline(csv, line);
    CHECK(line.rfind("realization_index,seed,gap_min,delta_P_1,delta_P_2,delta_P_3", 0) == 0);
    int rows = 0;
    while (std::getline(csv, line)) rows += !line.empty();
    CHECK(rows == 3);

    const json rec = json::parse(slurp(dir / "realization_0000.json"));
    CHECK(rec["schema"] == "nctorus.response/1");
    CHECK(rec["config_hash"] == c.hash());
    const json manifest = json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["status"] == "complete");
    CHECK(manifest["exit_code"] == 0);
    CHECK(manifest["config_hash"] == c.hash());
    CHECK(r.version == manifest["version"].get<std::string>());
}

TEST_CASE("gap closure stops the run with its exit code and marks the manifest") {
    const fs::path dir = scratch_dir("gapless");
    json j = {{"schema", "nctorus.run/1"},
              {"task", "polarization"},
              {"model", {{"family", "cubic"}}},
              {"geometry", {{"extents", {3, 3, 3}}}},
              {"path", {{"kind", "constant"}}},
              {"sampling", {{"intervals", 4}}},
              {"output", dir.string()}};
    const EnsembleResult r = run(parse_config(j.dump()));
    CHECK(!r.complete);
    CHECK(r.exit_code == exit_gap);
    CHECK(r.failed_realization == 0u);
    CHECK(!r.error.empty());
    const json manifest = json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["status"] == "incomplete");
    CHECK(manifest["exit_code"] == exit_gap);
}

TEST_CASE("exit codes of exception kinds") {
    CHECK(exit_code_for(ConfigError("x")) == exit_config);
    CHECK(exit_code_for(GapClosedError("x", 0.0)) == exit_gap);
    CHECK(exit_code_for(ResidueError("x", 1.0)) == exit_residue);
    CHECK(exit_code_for(IoError("x")) == exit_io);
}

TEST_CASE("sweep over the number of time steps") {
    const RunConfig base = patched(kPump, {{"ensemble", {{"realizations", 1}, {"disorder_strength", 0.0}}}});
    const SweepTable t = convergence_sweep(base, SweepAxis::intervals, {8, 16, 32});
    REQUIRE(t.rows.size() == 3);
    CHECK(t.complete);
    std::vector<double> dev;
    for (const auto& row : t.rows) {
        const double p = observable(row.result.records.front(), "delta_P_1");
        dev.push_back(std::abs(std::abs(p) - 1.0));
    }
    MESSAGE("pumped charge deviation " << dev[0] << " " << dev[1] << " " << dev[2]);
    CHECK(dev[1] < dev[0]);
    CHECK(dev[2] < dev[1]);
    CHECK(t.csv().find("\naxis,value,") != std::string::npos);
    CHECK(t.csv().find("delta_P_1_mean") != std::string::npos);
    CHECK(json::parse(t.json())["rows"].size() == 3);
}

TEST_CASE("sweep over extents keeps thin axes") {
    const RunConfig base = patched(kPump, {{"ensemble", {{"realizations", 1}}}});
    const SweepTable t = convergence_sweep(base, SweepAxis::extent, {5, 7});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.complete);
    CHECK(parse_sweep_axis("L") == SweepAxis::extent);
    CHECK(parse_sweep_axis("N_t") == SweepAxis::intervals);
    CHECK_THROWS_AS(parse_sweep_axis("temperature"), ConfigError);
}

TEST_CASE("partial integration on even and odd tori") {
    json j = {{"schema", "nctorus.run/1"},
              {"task", "identities"},
              {"model", {{"family", "cubic"}}},
              {"geometry", {{"extents", {9, 9, 9}}}}};
    const SweepTable t = convergence_sweep(parse_config(j.dump()), SweepAxis::extent, {8, 9});
    REQUIRE(t.rows.size() == 2);
    const double even = observable(t.rows[0].result.records.front(), "parity_probe");
    const double odd = observable(t.rows[1].result.records.front(), "parity_probe");
    MESSAGE("parity probe L = 8: " << even << ", L = 9: " << odd);
    CHECK(even > 1e-8);
    CHECK(odd < 1e-14);
}
