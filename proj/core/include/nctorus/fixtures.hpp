#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nctorus/hopping.hpp"
#include "nctorus/symmetry.hpp"

namespace nctorus {

using Parameters = std::map<std::string, double>;

/// A parameterized clean hopping table together with its symmetry data.
struct ModelFamily {
    std::string name;
    std::string description;
    int orbitals = 1;
    Parameters defaults;
    SymmetrySpec symmetry;
    std::function<HoppingTable(const Parameters&)> builder;

    /// Missing parameters fall back to the defaults; unknown names are rejected.
    Parameters resolve(const Parameters& overrides) const;
    HoppingTable hoppings(const Parameters& overrides = {}) const;
};

/// cubic, atomic, stacked_chern, qhz, rice_mele.
const std::vector<ModelFamily>& reference_models();

/// Throws InvalidInputError for unknown names.
const ModelFamily& reference_model(const std::string& name);

/// Family with no parameters that always returns `table`.
ModelFamily constant_family(std::string name, HoppingTable table, SymmetrySpec symmetry);

}  // namespace nctorus
