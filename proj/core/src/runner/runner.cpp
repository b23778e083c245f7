#include "nctorus/runner/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nctorus/bloch.hpp"
#include "nctorus/error.hpp"
#include "nctorus/parallel.hpp"

namespace nctorus::runner {

using nlohmann::json;

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const GapClosedError*>(&e)) return exit_gap;
    if (dynamic_cast<const ResidueError*>(&e)) return exit_residue;
    if (dynamic_cast<const IoError*>(&e)) return exit_io;
    return exit_config;
}

namespace {

PathSettings path_settings(const RunConfig& c, const TorusGeometry& geometry, std::size_t realization, int workers) {
    PathSettings s;
    s.geometry = geometry;
    s.flux = FluxTensor::from_numerators(geometry, c.flux_numerators);
    s.disorder = DisorderSpec{c.disorder_strength, c.master_seed, realization};
    s.fermi_level = c.fermi_level;
    s.intervals = c.intervals;
    s.quadrature = c.quadrature;
    s.derivative_order = c.derivative_order;
    s.gap_floor = c.tolerances.gap_floor;
    s.residue_tolerance = c.tolerances.residue;
    s.workers = workers;
    s.spectral.exclusion_window = c.tolerances.exclusion_window;
    return s;
}

ObservableRecord run_one(const RunConfig& c, const AdiabaticPath& path, const PathSettings& s) {
    switch (c.task) {
        case Task::polarization: {
            ObservableSelection what;
            what.chern2 = false;
            what.boundary = false;
            return polarization_record(evaluate_path(path, s, what));
        }
        case Task::delta_alpha:
            return delta_alpha_record(delta_alpha(path, s));
        case Task::chern2:
            return chern2_record(second_chern(path, s));
        case Task::z2:
            return z2_record(z2_from_trs_pair(path, s, c.tolerances.symmetry));
        case Task::identities: {
            const AlgebraElement h = path_hamiltonian(path, s, 0.0);
            return identities_record(calculus_identities(h), spectral_gap(h, s.fermi_level));
        }
    }
    throw ConfigError("unsupported task");
}

std::vector<std::pair<std::string, double>> oracle_values(const RunConfig& c, const AdiabaticPath& path, int grid_k) {
    const TableLoop loop = [&path](double t) { return path.hoppings(t); };
    switch (c.task) {
        case Task::polarization:
            if (!path.closed()) return {};
            return {{"delta_P_" + std::to_string(c.axis),
                     berry_polarization_change(loop, c.axis - 1, c.fermi_level, c.oracle.grid_t, grid_k, grid_k)}};
        case Task::chern2:
            return {{"chern2", second_chern_4d(loop, c.fermi_level, c.oracle.grid_t, grid_k)}};
        case Task::z2: {
            const AdiabaticPath full = path.concatenate(path.time_reversed().reversed());
            const TableLoop z2_loop = [&full](double t) { return full.hoppings(t); };
            const double c2 = second_chern_4d(z2_loop, c.fermi_level, c.oracle.grid_t, grid_k);
            return {{"chern2", c2}, {"delta_alpha", 0.5 * c2}};
        }
        case Task::delta_alpha:
        case Task::identities:
            return {};
    }
    return {};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::string realization_file(std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "realization_%04zu.json", k);
    return buf;
}

json manifest(const RunConfig& c, const std::string& kind, bool complete, const std::string& error,
              const std::vector<std::string>& files) {
    json out = {{"schema", "nctorus.manifest/1"},
                {"kind", kind},
                {"version", version_string()},
                {"config_hash", c.hash()},
                {"config", json::parse(c.canonical())},
                {"status", complete ? "complete" : "incomplete"},
                {"files", files}};
    if (!error.empty()) out["error"] = error;
    return out;
}

}  // namespace

EnsembleResult run(const RunConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    EnsembleResult result;
    result.task = to_string(c.task);
    result.config_hash = c.hash();
    result.version = version_string();

    const auto family = resolve_family(c);
    const AdiabaticPath path = build_path(c, family);
    const TorusGeometry geometry = build_geometry(c, family->orbitals);

    const std::size_t n = c.realizations;
    const bool across_realizations = n > 1;
    std::vector<std::optional<ObservableRecord>> records(n);
    std::vector<std::exception_ptr> failures(n);
    parallel_for(n, across_realizations ? c.workers : 1, [&](std::size_t r) {
        try {
            const PathSettings s = path_settings(c, geometry, r, across_realizations ? 1 : c.workers);
            ObservableRecord record = run_one(c, path, s);
            record.config_hash = result.config_hash;
            record.realization = r;
            record.seed = s.disorder.stream_key();
            records[r] = std::move(record);
        } catch (...) {
            failures[r] = std::current_exception();
        }
    });
    for (std::size_t r = 0; r < n; ++r) {
        if (records[r]) {
            result.records.push_back(std::move(*records[r]));
            continue;
        }
        if (!result.complete) continue;
        result.complete = false;
        result.failed_realization = r;
        try {
            std::rethrow_exception(failures[r]);
        } catch (const std::exception& e) {
            result.error = "realization " + std::to_string(r) + ": " + e.what();
            result.exit_code = exit_code_for(e);
        }
    }
    result.summary = summarize(result.records);
    if (c.oracle.enabled && result.complete) result.oracle = oracle_values(c, path, c.oracle.grid_k);
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!c.output.empty()) write_outputs(c, result);
    return result;
}

void write_outputs(const RunConfig& c, const EnsembleResult& result) {
    ensure_directory(c.output);
    std::vector<std::string> files;
    for (const ObservableRecord& r : result.records) {
        const std::string name = realization_file(r.realization);
        write_file(c.output / name, to_json(r));
        files.push_back(name);
    }
    write_file(c.output / "summary.csv", summary_csv(result.records, result.config_hash));
    write_file(c.output / "summary.json",
               ensemble_json(result.records, result.summary, result.task, result.config_hash, result.oracle));
    files.insert(files.end(), {"summary.csv", "summary.json"});
    json m = manifest(c, "run", result.complete, result.error, files);
    if (result.failed_realization) m["failed_realization"] = *result.failed_realization;
    m["exit_code"] = result.exit_code;
    write_file(c.output / "manifest.json", m.dump(2) + "\n");
    const json timing = {{"wall_seconds", result.wall_seconds}, {"workers", c.workers}};
    write_file(c.output / "timing.json", timing.dump(2) + "\n");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::extent: return "L";
        case SweepAxis::intervals: return "N_t";
        case SweepAxis::realizations: return "realizations";
        case SweepAxis::kgrid: return "kgrid";
    }
    return "L";
}

SweepAxis parse_sweep_axis(const std::string& name) {
    for (SweepAxis a : {SweepAxis::extent, SweepAxis::intervals, SweepAxis::realizations, SweepAxis::kgrid}) {
        if (to_string(a) == name) return a;
    }
    throw ConfigError("unknown sweep axis '" + name + "' (expected L, N_t, realizations or kgrid)");
}

SweepTable convergence_sweep(const RunConfig& config, SweepAxis axis, const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    SweepTable table;
    table.axis = axis;
    table.config_hash = config.hash();
    for (double v : values) {
        if (v != std::floor(v) || v < 1.0) throw ConfigError("sweep values must be positive integers");
    }
    const auto family = resolve_family(config);
    if (axis == SweepAxis::kgrid) {
        const AdiabaticPath path = build_path(config, family);
        for (double v : values) {
            SweepRow row;
            row.value = v;
            row.result.task = to_string(config.task);
            row.result.config_hash = table.config_hash;
            row.result.version = version_string();
            row.result.oracle = oracle_values(config, path, static_cast<int>(v));
            if (row.result.oracle.empty())
                throw ConfigError("task " + to_string(config.task) + " has no k-space oracle for this path");
            table.rows.push_back(std::move(row));
        }
        for (const auto& [k, x] : table.rows.front().result.oracle) table.names.push_back(k);
    } else {
        const int largest = *std::max_element(config.extents.begin(), config.extents.end());
        for (double v : values) {
            RunConfig c = config;
            c.output.clear();
            const int k = static_cast<int>(v);
            if (axis == SweepAxis::extent) {
                for (int& e : c.extents) {
                    if (e == largest) e = k;
                }
                const long dimension = static_cast<long>(c.extents[0]) * c.extents[1] * c.extents[2] * family->orbitals;
                if (dimension > kMaxDimension) throw ConfigError("sweep point exceeds the dense dimension limit");
            } else if (axis == SweepAxis::intervals) {
                if (k < 2) throw ConfigError("N_t must be at least 2");
                c.intervals = k;
            } else {
                c.realizations = static_cast<std::size_t>(k);
            }
            SweepRow row;
            row.value = v;
            row.result = run(c);
            table.complete = table.complete && row.result.complete;
            if (table.exit_code == exit_ok) table.exit_code = row.result.exit_code;
            table.rows.push_back(std::move(row));
            if (!table.complete) break;
        }
        table.names = table.rows.front().result.summary.names;
    }

    if (!config.output.empty()) {
        ensure_directory(config.output);
        write_file(config.output / "sweep.csv", table.csv());
        write_file(config.output / "sweep.json", table.json());
        std::string error;
        for (const SweepRow& row : table.rows) {
            if (!row.result.error.empty()) error = row.result.error;
        }
        json m = manifest(config, "sweep", table.complete, error, {"sweep.csv", "sweep.json"});
        m["axis"] = to_string(axis);
        m["values"] = values;
        m["exit_code"] = table.exit_code;
        write_file(config.output / "manifest.json", m.dump(2) + "\n");
    }
    return table;
}

namespace {

double row_gap(const SweepRow& row) {
    double g = 0.0;
    bool first = true;
    for (const ObservableRecord& r : row.result.records) {
        g = first ? r.gap_min : std::min(g, r.gap_min);
        first = false;
    }
    return g;
}

}  // namespace

std::string SweepTable::csv() const {
    std::string out = "# nctorus " + version_string() + "\n# config_hash " + config_hash + "\n";
    out += "axis,value";
    const bool oracle_only = axis == SweepAxis::kgrid;
    if (!oracle_only) out += ",gap_min";
    for (const std::string& n : names) out += oracle_only ? "," + n : "," + n + "_mean," + n + "_stderr";
    out += "\n";
    for (const SweepRow& row : rows) {
        out += to_string(axis) + "," + format_double(row.value);
        if (oracle_only) {
            for (const auto& [k, v] : row.result.oracle) out += "," + format_double(v);
        } else {
            out += "," + format_double(row_gap(row));
            const EnsembleSummary& s = row.result.summary;
            for (std::size_t c = 0; c < s.names.size(); ++c)
                out += "," + format_double(s.mean[c]) + "," + format_double(s.standard_error[c]);
        }
        out += "\n";
    }
    return out;
}

std::string SweepTable::json() const {
    nlohmann::json list = nlohmann::json::array();
    for (const SweepRow& row : rows) {
        nlohmann::json entry = {{"value", row.value}};
        if (axis == SweepAxis::kgrid) {
            nlohmann::json o = nlohmann::json::object();
            for (const auto& [k, v] : row.result.oracle) o[k] = v;
            entry["oracle"] = o;
        } else {
            nlohmann::json mean = nlohmann::json::object();
            nlohmann::json se = nlohmann::json::object();
            const EnsembleSummary& s = row.result.summary;
            for (std::size_t c = 0; c < s.names.size(); ++c) {
                mean[s.names[c]] = s.mean[c];
                se[s.names[c]] = s.standard_error[c];
            }
            entry["gap_min"] = row_gap(row);
            entry["mean"] = mean;
            entry["standard_error"] = se;
            entry["realizations"] = row.result.records.size();
            entry["status"] = row.result.complete ? "complete" : "incomplete";
        }
        list.push_back(entry);
    }
    const nlohmann::json out = {{"schema", "nctorus.sweep/1"},
                                {"axis", to_string(axis)},
                                {"config_hash", config_hash},
                                {"version", version_string()},
                                {"rows", list}};
    return out.dump(2) + "\n";
}

}  // namespace nctorus::runner
