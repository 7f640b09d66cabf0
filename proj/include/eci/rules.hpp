#pragma once

// Inference rules of the separoid calculus and its restricted/extended
// variants, with the shape guards that decide where each rule may fire.

#include "eci/lattice.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace eci {

enum class RuleId : std::uint8_t {
  // separoid axioms (stochastic or variation independence)
  P1, P2, P3, P4, P5,
  // extended CI, left slot fully stochastic
  P1r, P2r, P3r, P4r, P5r,
  // mirror images of P3'-P5'
  P3m, P4m, P5m,
  // X ⊥ (Y,Θ) | (Z,Φ)  ⇒  X ⊥ (Y,Θ\T) | (Z,Φ,T): decision variables may move
  // from the right slot into the conditioning slot
  DEC,
  // general form (decision variables allowed in the left slot)
  P1g, P2g, P3g, P4g, P5g,
};

/// "P1", "P1'", "P3''", "DEC", "P1g", ...
std::string_view rule_name(RuleId id);
std::optional<RuleId> rule_from_name(std::string_view name);
/// 0 for axiom schemes, 1 or 2 for the number of premises.
int rule_arity(RuleId id);

enum class Flag : std::uint8_t {
  discrete_regime_space,
  discrete_variables,
  dominating_regime,
  pairwise_semantics,
};

std::string_view flag_name(Flag f);
std::optional<Flag> flag_from_name(std::string_view name);

class Flags {
 public:
  Flags() = default;
  Flags(std::initializer_list<Flag> fs) {
    for (Flag f : fs) set(f);
  }
  void set(Flag f) { bits_ |= bit(f); }
  bool has(Flag f) const { return bits_ & bit(f); }
  bool any() const { return bits_ != 0; }
  /// The flag that licenses side-condition rules (first in declaration
  /// order), if any.
  std::optional<Flag> first() const;
  std::vector<Flag> list() const;

 private:
  static std::uint8_t bit(Flag f) { return static_cast<std::uint8_t>(1u << static_cast<int>(f)); }
  std::uint8_t bits_ = 0;
};

enum class RuleSetName { separoid_full, vci_strong, eci_restricted, general };

std::string_view rule_set_name(RuleSetName n);
std::optional<RuleSetName> rule_set_from_name(std::string_view name);

struct RuleSet {
  RuleSetName name = RuleSetName::separoid_full;
  std::vector<RuleId> rules;
  Flags flags;

  static RuleSet make(RuleSetName name, Flags flags = {});
  /// Throws InvalidArgument for an unknown name.
  static RuleSet named(std::string_view name, Flags flags = {});

  bool contains(RuleId id) const;
  /// Position of the rule in declaration order; used to break ties between
  /// equally short derivations.
  int rank(RuleId id) const;
};

struct RuleContext {
  const Universe& universe;
  const ReductionRegistry& reductions;
  const ComplementarityDecl& complements;
  const RuleSet& rules;
};

/// Whether the statement belongs to the language of the rule set: pure
/// statements for the separoid sets, well-formed statements for the extended
/// sets (no left-slot decision variables for ECI_RESTRICTED).
bool admissible(const RuleSet& rs, const CIStatement& s, const ComplementarityDecl& comp);

/// Rule-specific shape guard on a premise.
bool guard(RuleId id, const CIStatement& premise);

/// Finalized statements, indexed for the binary rules' partner lookups.
class StatementIndex {
 public:
  void insert(const CIStatement& s);
  bool contains(const CIStatement& s) const { return members_.count(s) != 0; }
  std::size_t size() const { return members_.size(); }

  /// Statements with the given left and conditioning slots.
  std::span<const CIStatement> by_left_cond(VarSet left, VarSet cond) const;
  /// Statements with the given left slot and right ∪ cond.
  std::span<const CIStatement> by_left_span(VarSet left, VarSet span) const;
  /// Statements with the given right and conditioning slots.
  std::span<const CIStatement> by_right_cond(VarSet right, VarSet cond) const;
  /// Statements with the given right slot and left ∪ cond.
  std::span<const CIStatement> by_right_span(VarSet right, VarSet span) const;

 private:
  struct Key {
    VarSet a, b;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      VarSetHash h;
      return h(k.a) * 31 + h(k.b);
    }
  };
  using Map = std::unordered_map<Key, std::vector<CIStatement>, KeyHash>;
  static std::span<const CIStatement> lookup(const Map& m, VarSet a, VarSet b);

  std::unordered_map<CIStatement, char, CIStatementHash> members_;
  Map left_cond_, left_span_, right_cond_, right_span_;
};

/// Receives one rule instance: its conclusion and premises (in the rule's
/// premise order). `license` is set for side-condition rules (P4'', P4g).
using Emit = std::function<void(const CIStatement& conclusion,
                                std::span<const CIStatement> premises,
                                std::optional<Flag> license)>;

/// Fires an axiom scheme over the universe of the context.
void fire_axioms(RuleId id, const RuleContext& ctx, const Emit& emit);

/// Fires a unary rule on one premise; no-op if the guard rejects it.
void fire_unary(RuleId id, const CIStatement& premise, const RuleContext& ctx,
                const Emit& emit);

/// Fires a binary rule with `s` in the first and/or second premise role,
/// taking partners from `index`.
void fire_binary(RuleId id, const CIStatement& s, const StatementIndex& index,
                 const RuleContext& ctx, const Emit& emit, bool as_first,
                 bool as_second);

/// All one-step conclusions of `rule` from `known` (sorted, unique).
/// Throws GuardViolation if a statement of `known` is outside the rule
/// set's language or, for unary rules, fails the rule's guard.
std::vector<CIStatement> apply_rule(RuleId rule, const std::vector<CIStatement>& known,
                                    const RuleContext& ctx);

/// Conclusions of one specific instance: `premises` in the rule's order.
std::vector<CIStatement> conclusions_of(RuleId rule, std::span<const CIStatement> premises,
                                        const RuleContext& ctx);

}  // namespace eci
