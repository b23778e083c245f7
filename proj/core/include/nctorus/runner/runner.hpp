#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nctorus/report.hpp"
#include "nctorus/runner/config.hpp"

namespace nctorus::runner {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_gap = 3,
    exit_residue = 4,
    exit_io = 5,
};

/// Exit code for an exception escaping a run; unknown kinds map to exit_config.
int exit_code_for(const std::exception& e);

struct EnsembleResult {
    std::string task;
    std::string config_hash;
    std::string version;
    /// Successful realizations in index order.
    std::vector<ObservableRecord> records;
    EnsembleSummary summary;
    /// Clean k-space value(s) of the observable when the oracle is enabled.
    std::vector<std::pair<std::string, double>> oracle;
    double wall_seconds = 0.0;
    bool complete = true;
    /// First failure in realization order.
    std::string error;
    std::optional<std::size_t> failed_realization;
    int exit_code = exit_ok;
};

/// Executes the task for every realization. Numerical failures do not throw:
/// they stop the realization, mark the result incomplete and set exit_code.
/// Writes the result files when config.output is non-empty.
EnsembleResult run(const RunConfig& config);

/// Writes realization_<k>.json, summary.csv, summary.json, manifest.json and
/// timing.json. Everything except timing.json depends only on the config.
void write_outputs(const RunConfig& config, const EnsembleResult& result);

enum class SweepAxis { extent, intervals, realizations, kgrid };
std::string to_string(SweepAxis axis);
/// "L", "N_t", "realizations" or "kgrid".
SweepAxis parse_sweep_axis(const std::string& name);

struct SweepRow {
    double value = 0.0;
    EnsembleResult result;
};

struct SweepTable {
    SweepAxis axis = SweepAxis::extent;
    std::string config_hash;
    std::vector<std::string> names;
    std::vector<SweepRow> rows;
    bool complete = true;
    int exit_code = exit_ok;

    /// axis, value, gap_min, <name>_mean, <name>_stderr for every observable.
    std::string csv() const;
    std::string json() const;
};

/// Repeats the task along the axis. `L` replaces every extent equal to the
/// largest configured extent, so layered geometries keep their thin axis.
/// `kgrid` evaluates only the clean k-space oracle. Writes sweep.csv,
/// sweep.json and manifest.json when config.output is non-empty.
SweepTable convergence_sweep(const RunConfig& config, SweepAxis axis, const std::vector<double>& values);

}  // namespace nctorus::runner
