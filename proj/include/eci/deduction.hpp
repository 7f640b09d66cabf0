#pragma once

// Closure and shortest-proof search over a rule set.
//
// Both run the same lightest-derivation search: statements are finalized in
// order of derivation tree size, so the first time the goal is finalized its
// derivation uses the fewest rule applications.

#include "eci/lattice.hpp"
#include "eci/rules.hpp"

#include "eci/json.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eci {

struct Limits {
  std::size_t max_statements = 200000;
  std::size_t max_depth = 64;
};

struct Derivation {
  CIStatement statement;
  /// Rule name, or empty for a premise.
  std::string rule;
  std::optional<Flag> license;
  std::vector<Derivation> children;

  bool is_premise() const { return rule.empty(); }
  /// Number of rule applications in the tree.
  std::size_t rule_applications() const;
  std::size_t depth() const;
};

struct ClosureResult {
  std::vector<CIStatement> statements;  // sorted
  bool truncated = false;
};

struct ProofResult {
  std::optional<Derivation> derivation;
  /// Set when a limit stopped the search before the goal was reached; a
  /// missing derivation is then inconclusive rather than a proof of
  /// non-derivability.
  bool truncated = false;
  explicit operator bool() const { return derivation.has_value(); }
};

/// Throws IllFormed if a premise is outside the rule set's language.
ClosureResult closure(const std::vector<CIStatement>& premises, const RuleContext& ctx,
                      const Limits& limits = {});

ProofResult prove(const CIStatement& goal, const std::vector<CIStatement>& premises,
                  const RuleContext& ctx, const Limits& limits = {});

/// Numbered proof lines, children before parents; repeated statements are
/// written once and referenced by number.
///
///   1. X _||_ Y | Z [premise]
///   2. Y _||_ X | Z [P1 from 1]
std::string format_proof(const Universe& u, const Derivation& d);

/// Re-checks every step of a derivation against the rule set. On failure
/// returns false and describes the first bad step in `why`.
bool replay(const Derivation& d, const std::vector<CIStatement>& premises, const RuleContext& ctx,
            std::string* why = nullptr);

/// Parses the text produced by format_proof(); the last line is the root.
/// Throws ParseError.
Derivation parse_proof(const Universe& u, std::string_view text);

Json derivation_to_json(const Universe& u, const Derivation& d);
Derivation derivation_from_json(const Universe& u, const Json& j);

}  // namespace eci
