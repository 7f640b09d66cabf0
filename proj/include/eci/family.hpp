#pragma once

// Regime-indexed families of distributions, decision variables on the regime
// space, and the constructions built from them (product space, domination,
// partition meets).

#include "eci/distribution.hpp"
#include "eci/lattice.hpp"
#include "eci/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace eci {

/// A function on the regime space: value index per regime.
struct DecisionVar {
  std::string name;
  std::vector<std::string> labels;
  std::vector<int> value;  // per regime

  int cardinality() const { return static_cast<int>(labels.size()); }
  friend bool operator==(const DecisionVar&, const DecisionVar&) = default;
};

/// Time-ordered observables L1..L(n+1) (the last group holds the response)
/// and actions A1..An, plus optional unmeasured groups U1..U(n+1).
struct InfoBase {
  std::vector<std::vector<std::string>> observables;
  std::vector<std::string> actions;
  std::vector<std::vector<std::string>> unmeasured;

  int stages() const { return static_cast<int>(actions.size()); }
  friend bool operator==(const InfoBase&, const InfoBase&) = default;
};

class RegimeFamily {
 public:
  RegimeFamily() = default;
  /// Throws InvalidModel if the distributions do not share one signature,
  /// counts disagree, or a decision variable is malformed.
  RegimeFamily(std::vector<std::string> regimes, std::vector<DiscreteDistribution> dists,
               std::vector<DecisionVar> decisions);

  const std::vector<std::string>& regimes() const { return regimes_; }
  int regime_count() const { return static_cast<int>(regimes_.size()); }
  /// Index of a regime label, or -1.
  int regime_index(std::string_view label) const;
  const std::vector<Variable>& variables() const { return dists_.front().variables(); }
  const DiscreteDistribution& dist(int regime) const { return dists_[static_cast<std::size_t>(regime)]; }
  const std::vector<DiscreteDistribution>& dists() const { return dists_; }
  const std::vector<DecisionVar>& decisions() const { return decisions_; }
  /// Index of a decision variable, or -1.
  int decision_index(std::string_view name) const;

  /// Adds a decision variable; throws InvalidModel if the name is taken.
  void add_decision(DecisionVar d);
  /// Name of a decision variable equal to the identity on regimes, adding
  /// one called "Sigma" (or a fresh variant) if none exists.
  std::string ensure_identity();

  const std::optional<InfoBase>& info_base() const { return info_base_; }
  /// Throws InvalidModel if the info base names unknown variables.
  void set_info_base(InfoBase ib);

  /// Code of the decision variables in `dec` at a regime (mixed radix).
  std::uint64_t decision_code(Mask dec, int regime) const;

  friend bool operator==(const RegimeFamily& a, const RegimeFamily& b) {
    return a.regimes_ == b.regimes_ && a.dists_ == b.dists_ && a.decisions_ == b.decisions_ &&
           a.info_base_ == b.info_base_;
  }

 private:
  void validate_decision(const DecisionVar& d) const;

  std::vector<std::string> regimes_;
  std::vector<DiscreteDistribution> dists_;
  std::vector<DecisionVar> decisions_;
  std::optional<InfoBase> info_base_;
};

/// Stochastic variables in signature order, decision variables in family
/// order.
Universe universe_of(const RegimeFamily& fam);

/// True iff the joint map σ ↦ (values of `dec` at σ) is injective.
bool check_complementary(const RegimeFamily& fam, Mask dec);

/// R(X | given): values taken by the decision variables `x` over regimes
/// matching `given` (decision index, value index pairs), as value-index
/// tuples in increasing variable order. Throws EmptyContext if no regime
/// matches. `regimes` restricts the regime space when non-empty.
std::vector<std::vector<int>> conditional_image(const RegimeFamily& fam, Mask x,
                                                const PartialAssignment& given,
                                                const std::vector<int>& regimes = {});

/// Regimes under which the assignment `z` of the stochastic variables `Z`
/// (values in increasing variable order) has positive probability.
std::vector<int> compute_S_z(const RegimeFamily& fam, Mask Z, const std::vector<int>& z);

/// A regime of `subset` whose support contains the supports of all others;
/// among several, the one with the lowest label.
std::optional<int> find_dominating(const RegimeFamily& fam, const std::vector<int>& subset);

/// Finest common coarsening of the partitions induced by two functions on
/// the same finite set, as block ids numbered by first occurrence.
std::vector<int> partition_meet(const std::vector<int>& a, const std::vector<int>& b);

/// Name of the regime coordinate in product_space(); "regime" unless taken.
std::string regime_coordinate_name(const RegimeFamily& fam);

/// Joint distribution on Ω × 𝒮: the family's variables, then the regime
/// coordinate, then every decision variable as a stochastic variable.
/// Throws InvalidPrior unless the prior has one strictly positive entry per
/// regime and sums to 1.
DiscreteDistribution product_space(const RegimeFamily& fam, const std::vector<Rational>& prior);

}  // namespace eci
