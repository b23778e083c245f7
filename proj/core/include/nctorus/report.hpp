#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nctorus/identities.hpp"
#include "nctorus/response.hpp"

namespace nctorus {

std::string version_string();

/// Flat, ordered record of one realization, the unit written to disk.
struct ObservableRecord {
    std::string task;
    std::string config_hash;
    std::size_t realization = 0;
    std::uint64_t seed = 0;
    double gap_min = 0.0;
    std::vector<std::pair<std::string, double>> observables;
    std::vector<std::pair<std::string, std::string>> labels;
    std::vector<std::pair<std::string, double>> diagnostics;
    std::vector<double> gap_profile;
};

ObservableRecord polarization_record(const ResponseReport& report);
ObservableRecord delta_alpha_record(const ResponseReport& report);
ObservableRecord chern2_record(const ResponseReport& report);
ObservableRecord z2_record(const Z2Record& record);
ObservableRecord identities_record(const IdentityReport& report, double gap);

/// Schema nctorus.response/1, keys sorted, two-space indent.
std::string to_json(const ObservableRecord& record);

/// Mean and standard error of every observable, summed in realization order.
struct EnsembleSummary {
    std::vector<std::string> names;
    std::vector<double> mean;
    std::vector<double> standard_error;
};
EnsembleSummary summarize(const std::vector<ObservableRecord>& records);

/// Schema nctorus.ensemble/1: all records plus the summary.
std::string ensemble_json(const std::vector<ObservableRecord>& records, const EnsembleSummary& summary,
                          const std::string& task, const std::string& config_hash,
                          const std::vector<std::pair<std::string, double>>& oracle = {});

/// realization_index, seed, gap_min, observables..., labels..., after two
/// '#' lines naming the version and config hash.
std::string summary_csv(const std::vector<ObservableRecord>& records, const std::string& config_hash);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

}  // namespace nctorus
