#pragma once

// JSON model files.
//
//   {"regimes": ["s0", "s1"],
//    "decision_vars": {"Sigma": {"s0": "0", "s1": "1"}},
//    "variables": {"X": ["0", "1"], "T": ["0", "1"]},
//    "distributions": {"s0": [{"assign": {"X": "0", "T": "1"}, "p": "1/4"}, ...], ...},
//    "info_base": {"observables": [["L1"], ["Y"]], "actions": ["A1"], "unmeasured": []}}
//
// A single-distribution file has "variables" and "distribution" (a list of
// entries) and no regimes. Atoms not listed have probability 0. Decision
// value labels default to first appearance order; "decision_values" may
// list them explicitly.

#include "eci/family.hpp"
#include "eci/json.hpp"

#include <string>

namespace eci {

struct Model {
  RegimeFamily family;
  /// Loaded from (and written back as) a single-distribution file.
  bool single = false;
};

/// Throws InvalidModel for structural problems.
Model model_from_json(const Json& j);
Json model_to_json(const Model& m);
Json family_to_json(const RegimeFamily& fam);
Json distribution_to_json(const DiscreteDistribution& d);

/// Single distribution as a one-regime family.
Model single_model(const DiscreteDistribution& d);

Model load_model(const std::string& path);
void save_json(const std::string& path, const Json& j);
Json load_json(const std::string& path);

/// Probability masses: "num/den" strings, integers, or decimals.
Rational rational_from_json(const Json& j);

}  // namespace eci
