#include "nctorus/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace nctorus {

using nlohmann::json;

#ifndef NCTORUS_VERSION_STRING
#define NCTORUS_VERSION_STRING "unknown"
#endif

std::string version_string() { return NCTORUS_VERSION_STRING; }

namespace {

ObservableRecord common(const std::string& task, const ResponseReport& r) {
    ObservableRecord out;
    out.task = task;
    out.gap_min = r.min_gap();
    out.gap_profile = r.gap_profile;
    out.diagnostics = {{"max_imaginary_residue", r.max_imaginary_residue},
                       {"max_proof_identity", r.max_proof_identity},
                       {"endpoint_rate", r.endpoint_rate},
                       {"step", r.step},
                       {"intervals", static_cast<double>(r.intervals)},
                       {"derivative_order", static_cast<double>(r.derivative_order)}};
    out.labels = {{"quadrature", to_string(r.quadrature)}, {"closed", r.closed ? "true" : "false"}};
    return out;
}

}  // namespace

ObservableRecord polarization_record(const ResponseReport& r) {
    ObservableRecord out = common("polarization", r);
    for (int j = 0; j < 3; ++j) out.observables.emplace_back("delta_P_" + std::to_string(j + 1), r.delta_P[j]);
    if (r.delta_P_coarse) {
        for (int j = 0; j < 3; ++j)
            out.diagnostics.emplace_back("delta_P_coarse_" + std::to_string(j + 1), (*r.delta_P_coarse)[j]);
    }
    return out;
}

ObservableRecord delta_alpha_record(const ResponseReport& r) {
    ObservableRecord out = common("delta_alpha", r);
    out.observables = {{"delta_alpha_topological", r.delta_alpha_topological},
                       {"delta_alpha_boundary", r.delta_alpha_boundary},
                       {"delta_alpha", r.delta_alpha}};
    if (r.delta_alpha_topological_coarse)
        out.diagnostics.emplace_back("delta_alpha_topological_coarse", *r.delta_alpha_topological_coarse);
    out.diagnostics.emplace_back("boundary_raw_initial", r.boundary_raw[0]);
    out.diagnostics.emplace_back("boundary_raw_final", r.boundary_raw[1]);
    return out;
}

ObservableRecord chern2_record(const ResponseReport& r) {
    ObservableRecord out = common("chern2", r);
    out.observables = {{"chern2", r.chern2.value_or(0.0)}};
    if (r.delta_alpha_topological_coarse) out.diagnostics.emplace_back("chern2_coarse", *r.delta_alpha_topological_coarse);
    return out;
}

ObservableRecord z2_record(const Z2Record& z) {
    ObservableRecord out = common("z2", z.loop);
    out.observables = {{"chern2", z.chern2}, {"delta_alpha", z.delta_alpha}, {"distance", z.distance}};
    out.labels.emplace_back("class", to_string(z.classification));
    return out;
}

ObservableRecord identities_record(const IdentityReport& r, double gap) {
    ObservableRecord out;
    out.task = "identities";
    out.gap_min = gap;
    out.observables = {{"trace_derivative", r.trace_derivative},
                       {"partial_integration", r.partial_integration},
                       {"leibniz", r.leibniz},
                       {"star_derivation", r.star_derivation},
                       {"inverse", r.inverse},
                       {"cyclicity", r.cyclicity},
                       {"positivity", r.positivity},
                       {"parity_probe", r.parity_probe}};
    out.labels = {{"passed", r.passed() ? "true" : "false"}};
    return out;
}

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

json record_json(const ObservableRecord& r) {
    json observables = json::object();
    for (const auto& [k, v] : r.observables) observables[k] = v;
    json labels = json::object();
    for (const auto& [k, v] : r.labels) labels[k] = v;
    json diagnostics = json::object();
    for (const auto& [k, v] : r.diagnostics) diagnostics[k] = v;
    return {{"realization", r.realization}, {"seed", r.seed},       {"gap_min", r.gap_min},
            {"observables", observables},   {"labels", labels},     {"diagnostics", diagnostics},
            {"gap_profile", r.gap_profile}};
}

}  // namespace

std::string to_json(const ObservableRecord& r) {
    json out = record_json(r);
    out["schema"] = "nctorus.response/1";
    out["task"] = r.task;
    out["config_hash"] = r.config_hash;
    out["version"] = version_string();
    return out.dump(2) + "\n";
}

EnsembleSummary summarize(const std::vector<ObservableRecord>& records) {
    EnsembleSummary out;
    if (records.empty()) return out;
    for (const auto& [k, v] : records.front().observables) out.names.push_back(k);
    const std::size_t n = records.size();
    out.mean.assign(out.names.size(), 0.0);
    out.standard_error.assign(out.names.size(), 0.0);
    for (std::size_t c = 0; c < out.names.size(); ++c) {
        double sum = 0.0;
        for (const ObservableRecord& r : records) sum += r.observables.at(c).second;
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (const ObservableRecord& r : records) {
            const double d = r.observables.at(c).second - mean;
            ss += d * d;
        }
        out.mean[c] = mean;
        out.standard_error[c] = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    }
    return out;
}

std::string ensemble_json(const std::vector<ObservableRecord>& records, const EnsembleSummary& summary,
                          const std::string& task, const std::string& config_hash,
                          const std::vector<std::pair<std::string, double>>& oracle) {
    json list = json::array();
    for (const ObservableRecord& r : records) list.push_back(record_json(r));
    json mean = json::object();
    json se = json::object();
    for (std::size_t c = 0; c < summary.names.size(); ++c) {
        mean[summary.names[c]] = summary.mean[c];
        se[summary.names[c]] = summary.standard_error[c];
    }
    json out = {{"schema", "nctorus.ensemble/1"}, {"task", task},
                {"config_hash", config_hash},    {"version", version_string()},
                {"realizations", list},          {"mean", mean},
                {"standard_error", se}};
    if (!oracle.empty()) {
        json o = json::object();
        for (const auto& [k, v] : oracle) o[k] = v;
        out["oracle"] = o;
    }
    return out.dump(2) + "\n";
}

std::string summary_csv(const std::vector<ObservableRecord>& records, const std::string& config_hash) {
    std::ostringstream out;
    out << "# nctorus " << version_string() << "\n# config_hash " << config_hash << "\n";
    out << "realization_index,seed,gap_min";
    if (!records.empty()) {
        for (const auto& [k, v] : records.front().observables) out << "," << k;
        for (const auto& [k, v] : records.front().labels) out << "," << k;
    }
    out << "\n";
    for (const ObservableRecord& r : records) {
        out << r.realization << "," << r.seed << "," << format_double(r.gap_min);
        for (const auto& [k, v] : r.observables) out << "," << format_double(v);
        for (const auto& [k, v] : r.labels) out << "," << v;
        out << "\n";
    }
    return out.str();
}

}  // namespace nctorus
