#pragma once

// Finite joint distributions with exact rational masses.
//
// Atoms are full assignments in mixed-radix order (first variable varies
// slowest). Alongside the rational pmf each distribution keeps the masses
// scaled to a common denominator, so checkers can compare conditional
// probabilities by integer cross-multiplication.

#include "eci/lattice.hpp"
#include "eci/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace eci {

struct Variable {
  std::string name;
  std::vector<std::string> values;

  int cardinality() const { return static_cast<int>(values.size()); }
  /// Index of a value label, or -1.
  int value_index(std::string_view label) const;
  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Value indices, one per variable of the owning distribution.
using Assignment = std::vector<int>;
/// (variable index, value index) pairs.
using PartialAssignment = std::vector<std::pair<int, int>>;

class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;
  /// Throws InvalidModel unless the pmf has one entry per atom, all entries
  /// are non-negative and they sum to exactly 1.
  DiscreteDistribution(std::vector<Variable> vars, std::vector<Rational> pmf);

  const std::vector<Variable>& variables() const { return vars_; }
  int variable_count() const { return static_cast<int>(vars_.size()); }
  /// Index of the named variable, or -1.
  int index_of(std::string_view name) const;
  std::size_t atom_count() const { return pmf_.size(); }
  const std::vector<Rational>& pmf() const { return pmf_; }
  const Rational& p(std::size_t atom) const { return pmf_[atom]; }

  Assignment decode(std::size_t atom) const;
  std::size_t encode(const Assignment& a) const;
  int value(std::size_t atom, int var) const { return values_[atom * vars_.size() + var]; }

  /// Masses over a common denominator: p(atom) = mass(atom) / total.
  const std::vector<BigInt>& big_masses() const { return big_mass_; }
  const BigInt& big_total() const { return big_total_; }
  /// Same masses as 64-bit integers when the common denominator is below
  /// 2^62 (products then fit in 128 bits); empty otherwise.
  const std::vector<std::int64_t>& small_masses() const { return small_mass_; }
  std::int64_t small_total() const { return small_total_; }
  bool has_small_masses() const { return !small_mass_.empty(); }

  Rational probability(const PartialAssignment& event) const;

  /// Marginal over the variables in `vars` (bit i = variable i), keyed by the
  /// value indices of those variables in increasing variable order.
  std::map<std::vector<int>, Rational> marginal(Mask vars) const;

  /// Exact conditional pmf of `targets` given an event. Zero entries are
  /// omitted. Throws ZeroConditioningEvent if the event has probability 0.
  std::map<std::vector<int>, Rational> conditional(Mask targets,
                                                   const PartialAssignment& given) const;

  friend bool operator==(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    return a.vars_ == b.vars_ && a.pmf_ == b.pmf_;
  }

 private:
  std::vector<Variable> vars_;
  std::vector<Rational> pmf_;
  std::vector<int> values_;  // atom-major value table
  std::vector<BigInt> big_mass_;
  BigInt big_total_;
  std::vector<std::int64_t> small_mass_;
  std::int64_t small_total_ = 0;
};

/// Universe whose stochastic variables are the distribution's variables, in
/// order (so statement masks index variables directly).
Universe universe_of(const DiscreteDistribution& d);

/// Number of atoms for a list of variables; throws InvalidModel on overflow
/// or zero-cardinality variables.
std::size_t atom_count(const std::vector<Variable>& vars);

}  // namespace eci
