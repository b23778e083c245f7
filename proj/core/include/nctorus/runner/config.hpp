#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nctorus/fixtures.hpp"
#include "nctorus/geometry.hpp"
#include "nctorus/path.hpp"
#include "nctorus/response.hpp"

namespace nctorus::runner {

inline constexpr const char* kConfigSchema = "nctorus.run/1";

enum class Task { polarization, delta_alpha, chern2, z2, identities };
std::string to_string(Task task);
Task parse_task(const std::string& name);

enum class ToleranceProfile { standard, strict };
std::string to_string(ToleranceProfile profile);
ToleranceProfile parse_tolerance_profile(const std::string& name);

struct Tolerances {
    double gap_floor = 1e-3;
    double residue = 1e-10;
    double exclusion_window = 1e-10;
    /// Tolerance of the TRS endpoint check in the z2 task.
    double symmetry = 1e-10;

    static Tolerances for_profile(ToleranceProfile profile);
};

/// Path grammar of the config file: a single constant point, a family loop,
/// or a chain of linear / arc / constant segments.
struct PathDefinition {
    enum class Kind { constant, loop, segments };
    Kind kind = Kind::constant;
    /// constant: the point; loop: the fixed parameters.
    Parameters base;
    std::string x_parameter;
    std::string y_parameter;
    double center_x = 0.0;
    double center_y = 0.0;
    double radius = 0.0;
    std::vector<PathSegment> segments;
};

struct OracleSettings {
    bool enabled = false;
    int grid_k = 12;
    int grid_t = 48;
};

struct RunConfig {
    /// Reference family name, or empty when `model_file` is set.
    std::string model_family;
    std::optional<std::filesystem::path> model_file;
    /// Canonical text of the loaded model file; hashed instead of the path.
    std::string model_text;
    /// Overrides of the family defaults, applied at every path point.
    Parameters model_parameters;
    Coords extents{5, 5, 5};
    std::array<long, 3> flux_numerators{0, 0, 0};
    double fermi_level = 0.0;
    PathDefinition path;
    int intervals = 24;
    Quadrature quadrature = Quadrature::trapezoid;
    int derivative_order = 4;
    std::size_t realizations = 1;
    std::uint64_t master_seed = 0;
    double disorder_strength = 0.0;
    Task task = Task::identities;
    /// Axis of the Berry-phase oracle for the polarization task, 1-based.
    int axis = 1;
    ToleranceProfile profile = ToleranceProfile::standard;
    Tolerances tolerances;
    OracleSettings oracle;
    std::filesystem::path output;
    /// Not part of the hash: results do not depend on it.
    int workers = 1;

    /// Sorted-key JSON of every field that affects results.
    std::string canonical() const;
    /// 16 hex digits of FNV-1a over canonical().
    std::string hash() const;
    /// Non-fatal remarks, e.g. even extents.
    std::vector<std::string> warnings() const;
};

/// Largest dense dimension a run accepts.
inline constexpr long kMaxDimension = 4096;

/// Validates against the schema; relative paths resolve against `base_dir`.
/// Throws ConfigError.
RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
/// Throws IoError when unreadable, ConfigError when invalid.
RunConfig load_config(const std::filesystem::path& path);

/// Family and path the config describes; loads the model file if any.
std::shared_ptr<const ModelFamily> resolve_family(const RunConfig& config);
AdiabaticPath build_path(const RunConfig& config, std::shared_ptr<const ModelFamily> family);
TorusGeometry build_geometry(const RunConfig& config, int orbitals);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace nctorus::runner
