#pragma once

// Seeded model generation, counterexample search and axiom-soundness scans.
//
// Every generated model is a pure function of (config, index): trial i uses
// its own RNG stream, so results never depend on evaluation order.

#include "eci/checks.hpp"
#include "eci/family.hpp"
#include "eci/json.hpp"
#include "eci/lattice.hpp"
#include "eci/model_io.hpp"
#include "eci/rules.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eci {

struct SearchConfig {
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000;
  /// Stochastic variables and their value counts, in order.
  std::vector<std::pair<std::string, int>> var_cardinalities;
  int regime_count = 1;
  /// Atom masses are drawn from {0, ..., grid} and normalized.
  int grid = 4;
  /// Decision variables drawn as random functions on the regimes.
  std::vector<std::pair<std::string, int>> decision_cardinalities;
  /// Adds the identity "Sigma" as the first decision variable of families.
  bool include_identity = true;
  /// Enumerate every grid point (and every decision function) instead of
  /// sampling; `trials` then caps the number of models visited.
  bool exhaustive = false;

  /// Throws InvalidArgument for trials < 1, grid < 1, cardinalities < 1 or
  /// regime_count < 1.
  void validate() const;
};

DiscreteDistribution random_distribution(const SearchConfig& cfg, std::uint64_t index);
RegimeFamily random_family(const SearchConfig& cfg, std::uint64_t index);

/// Number of models in exhaustive mode (saturating at UINT64_MAX).
std::uint64_t exhaustive_count(const SearchConfig& cfg, bool family);
DiscreteDistribution distribution_at(const SearchConfig& cfg, std::uint64_t index);
RegimeFamily family_at(const SearchConfig& cfg, std::uint64_t index);

enum class Semantics { sci, vci, eci };

std::string_view semantics_name(Semantics s);
std::optional<Semantics> semantics_from_name(std::string_view name);

/// Evaluates one statement on a model under the chosen semantics (ECI
/// statements with left-slot decision variables use the general form).
/// Throws SemanticsMismatch when the statement's kinds do not fit.
bool evaluate(const RegimeFamily& fam, const CIStatement& s, Semantics sem);

struct Counterexample {
  std::uint64_t trial = 0;
  Model model;
  /// {"semantics", "trial", "premises": [{"statement", "holds"}], "goal": {...}}
  Json report;
  /// Model file with the report attached under "report".
  Json serialized() const;
};

/// First model (by trial index) on which every premise holds and the goal
/// fails. Statements are mapped onto the model variables by name. Models on
/// which a statement is not complementary are skipped.
std::optional<Counterexample> search_counterexample(const Universe& u,
                                                    const std::vector<CIStatement>& premises,
                                                    const CIStatement& goal,
                                                    const SearchConfig& cfg, Semantics sem);

/// Reloads a serialized counterexample and re-checks it from scratch.
bool verify_counterexample(const Json& serialized, std::string* why = nullptr);

struct ScanReport {
  std::uint64_t models = 0;
  std::uint64_t instances = 0;  // rule instances whose premises held
  std::uint64_t violations = 0;
  /// First violation: {"trial", "rule", "premises", "conclusion", "model"}.
  std::optional<Json> first_violation;
  Json to_json() const;
};

/// For every generated model and every rule instance of `rs` over the model
/// variables: if the premises hold, the conclusion must hold. SEPAROID_FULL
/// is checked against stochastic independence, VCI_STRONG against variation
/// independence (including P6 with partition meets), the extended sets
/// against ECI. Side-condition rules are only checked where their flag's
/// hypothesis holds on the model.
ScanReport axiom_soundness_scan(const SearchConfig& cfg, const RuleSet& rs);

}  // namespace eci
