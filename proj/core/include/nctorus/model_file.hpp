#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "nctorus/disorder.hpp"
#include "nctorus/hopping.hpp"
#include "nctorus/symmetry.hpp"

namespace nctorus {

/// Contents of a model definition file (format nctorus-model/1, see
/// docs/model-format.md).
struct ModelDefinition {
    std::string name = "model";
    int orbitals = 1;
    HoppingTable hoppings{1};
    std::optional<Coords> extents;
    std::array<long, 3> flux_numerators{0, 0, 0};
    DisorderSpec disorder;
    SymmetrySpec symmetry = SymmetrySpec::trivial(1);
};

/// Throws ConfigError with the offending line number.
ModelDefinition parse_model(const std::string& text);
/// Throws IoError when the file cannot be read.
ModelDefinition load_model(const std::filesystem::path& path);

/// Canonical text form; parse_model(write_model(m)) reproduces m exactly.
std::string write_model(const ModelDefinition& model);

}  // namespace nctorus
