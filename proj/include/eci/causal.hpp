#pragma once

// Ancillarity, sufficiency, average causal effects, stability and the
// g-formula, all evaluated exactly on finite regime families.

#include "eci/checks.hpp"
#include "eci/family.hpp"
#include "eci/json.hpp"
#include "eci/lattice.hpp"
#include "eci/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace eci {

/// T ⊥ Σ: the marginal of T is the same in every regime.
bool check_ancillarity(const RegimeFamily& fam, Mask T);

/// X ⊥ Σ | T. T must be part of X or a registered reduction of it
/// (ReductionMissing otherwise); names in `reg` refer to universe_of(fam).
bool check_sufficiency(const RegimeFamily& fam, Mask X, Mask T,
                       const ReductionRegistry& reg = {});

struct AceLabels {
  std::string obs = "obs";
  std::string do0 = "do0";
  std::string do1 = "do1";
};

struct AceResult {
  Rational ace_interventional;
  std::optional<Rational> ace_observational;  // absent without positivity
  bool positivity = false;                    // both observational arms have mass
  bool transfer_valid = false;                // Y ⊥ Σ | T and positivity
  Json to_json() const;
};

/// E_do1(Y) - E_do0(Y), and E_obs(Y | T=1) - E_obs(Y | T=0) when both arms
/// have positive observational mass. T is binary (its first and second
/// values play t=0 and t=1); Y's value labels must be numbers.
/// Throws NotIntervention unless P_do_t(T = t) = 1, InvalidModel for a
/// missing regime, non-binary T or non-numeric Y.
AceResult ace(const RegimeFamily& fam, const std::string& Y, const std::string& T,
              const AceLabels& labels = {});

/// L_i ⊥ Σ | (L̄_{i-1}, Ā_{i-1}) for every stage i = 1..n+1 (empty groups
/// hold trivially). Uses the family's info base unless one is given.
bool check_simple_stability(const RegimeFamily& fam, const std::optional<InfoBase>& ib = std::nullopt);

/// (L_i, U_i) ⊥ Σ | (L̄_{i-1}, Ū_{i-1}, Ā_{i-1}) for every stage.
bool check_extended_stability(const RegimeFamily& fam,
                              const std::optional<InfoBase>& ib = std::nullopt);

/// Stagewise action kernels. A kernel applies when its history (a partial
/// assignment of earlier observables and actions) agrees with the
/// trajectory; the first applicable kernel of a stage is used.
struct Strategy {
  struct Kernel {
    std::map<std::string, std::string> history;
    std::map<std::string, Rational> dist;  // action value label -> probability
  };
  struct Stage {
    std::string action;
    std::vector<Kernel> kernels;
  };
  std::string regime;
  std::vector<Stage> stages;
};

/// {"regime": "s", "stages": [{"action": "A1", "kernels": [{"history": {...},
/// "dist": {"0": "1/2", "1": "1/2"}}]}]}. Throws InvalidModel when a kernel
/// does not sum to 1 or has a negative entry.
Strategy strategy_from_json(const Json& j);
Json strategy_to_json(const Strategy& s);

/// E_s{k(Y)} = Σ over trajectories of the strategy kernels times the
/// observational L-kernels, where Y is the last variable of the last
/// observable group. Throws StabilityViolated if simple stability fails,
/// PositivityViolated if a context reachable under the strategy has zero
/// observational probability, InvalidArgument for a strategy that does not
/// match the info base, lacks a kernel for a reachable history, or a k
/// missing a value of Y.
Rational g_formula(const RegimeFamily& fam, const Strategy& strat,
                   const std::map<std::string, Rational>& k, const std::string& obs = "obs",
                   const std::optional<InfoBase>& ib = std::nullopt);

}  // namespace eci
