#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nctorus/bloch.hpp"
#include "nctorus/error.hpp"
#include "nctorus/fixtures.hpp"
#include "nctorus/model_file.hpp"
#include "nctorus/runner/runner.hpp"

namespace {

using namespace nctorus;
using nlohmann::json;

struct Overrides {
    std::string config;
    std::string out;
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
    std::string profile;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "run configuration (nctorus.run/1 JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output directory, replaces the config's 'output'");
    cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "master seed override");
    cmd->add_option("--tolerance-profile", o.profile, "tolerance profile")->check(CLI::IsMember({"default", "strict"}));
}

runner::RunConfig load(const Overrides& o) {
    std::ifstream in(o.config);
    if (!in) throw IoError("cannot read config " + o.config);
    std::ostringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (!o.out.empty()) j["output"] = o.out;
    if (o.workers) j["workers"] = *o.workers;
    if (o.seed) j["ensemble"]["master_seed"] = *o.seed;
    if (!o.profile.empty()) j["tolerance_profile"] = o.profile;
    runner::RunConfig c = runner::parse_config(j.dump(), std::filesystem::path(o.config).parent_path());
    for (const std::string& w : c.warnings()) std::cerr << "warning: " << w << "\n";
    return c;
}

void print_summary(const runner::EnsembleResult& r) {
    std::cout << "task " << r.task << "  config " << r.config_hash << "  realizations " << r.records.size() << "\n";
    for (std::size_t c = 0; c < r.summary.names.size(); ++c) {
        std::cout << "  " << r.summary.names[c] << " = " << format_double(r.summary.mean[c]) << " +- "
                  << format_double(r.summary.standard_error[c]) << "\n";
    }
    for (const auto& [k, v] : r.oracle) std::cout << "  oracle " << k << " = " << format_double(v) << "\n";
    if (!r.complete) std::cerr << "incomplete: " << r.error << "\n";
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("sweep value '" + item + "' is not a number");
        }
    }
    return out;
}

Parameters parse_parameters(const std::vector<std::string>& items) {
    Parameters out;
    for (const std::string& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("expected name=value, got '" + item + "'");
        try {
            out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("parameter value in '" + item + "' is not a number");
        }
    }
    return out;
}

int list_fixtures(const std::string& name, const std::vector<std::string>& sets) {
    if (name.empty()) {
        for (const ModelFamily& f : reference_models()) {
            std::cout << f.name << " (" << f.orbitals << " orbitals): " << f.description << "\n  defaults:";
            for (const auto& [k, v] : f.defaults) std::cout << " " << k << "=" << format_double(v);
            std::cout << "\n";
        }
        return 0;
    }
    const ModelFamily& f = reference_model(name);
    ModelDefinition m;
    m.name = f.name;
    m.orbitals = f.orbitals;
    m.hoppings = f.hoppings(parse_parameters(sets));
    m.symmetry = f.symmetry;
    std::cout << write_model(m);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-torus magneto-electric response and Chern number runner"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_string());

    Overrides run_opts;
    auto* run_cmd = app.add_subcommand("run", "execute the configured task for every realization");
    add_common(run_cmd, run_opts);

    Overrides sweep_opts;
    std::string axis;
    std::string values;
    auto* sweep_cmd = app.add_subcommand("sweep", "repeat the task along one convergence axis");
    add_common(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--axis", axis, "L, N_t, realizations or kgrid")->required();
    sweep_cmd->add_option("--values", values, "comma-separated axis values")->required();

    std::string fixture;
    std::vector<std::string> sets;
    auto* fixtures_cmd = app.add_subcommand("fixtures", "list reference models or print one as a model file");
    fixtures_cmd->add_option("name", fixture, "family to print in nctorus-model/1 format");
    fixtures_cmd->add_option("--set", sets, "parameter override name=value");

    Overrides validate_opts;
    auto* validate_cmd = app.add_subcommand("validate", "check a config and print its hash");
    add_common(validate_cmd, validate_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : runner::exit_config;
    }

    try {
        if (*run_cmd) {
            const runner::RunConfig c = load(run_opts);
            const runner::EnsembleResult r = runner::run(c);
            print_summary(r);
            return r.exit_code;
        }
        if (*sweep_cmd) {
            const runner::RunConfig c = load(sweep_opts);
            const runner::SweepTable t = runner::convergence_sweep(c, runner::parse_sweep_axis(axis), parse_values(values));
            std::cout << t.csv();
            return t.exit_code;
        }
        if (*fixtures_cmd) return list_fixtures(fixture, sets);
        if (*validate_cmd) {
            const runner::RunConfig c = load(validate_opts);
            std::cout << "ok " << c.hash() << "\n" << c.canonical() << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return runner::exit_code_for(e);
    }
    return 0;
}
