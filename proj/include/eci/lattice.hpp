#pragma once

// Variable universe, statement representation and the functional-reduction
// quasiorder.
//
// Variables are interned per kind; a VarSet is a pair of bitmasks over the
// stochastic and decision variables of one Universe. Canonical form (sorted,
// duplicate-free) therefore holds by construction, with "sorted" meaning
// declaration order within the universe.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace eci {

using Mask = std::uint64_t;

inline constexpr int kMaxVariablesPerKind = 64;

enum class VarKind : std::uint8_t { stochastic, decision };

std::string_view kind_name(VarKind kind);

struct VariableDecl {
  std::string name;
  VarKind kind;
};

struct VariableRef {
  VarKind kind;
  int index;
};

class Universe {
 public:
  Universe() = default;
  Universe(const std::vector<std::string>& stochastic,
           const std::vector<std::string>& decision);

  /// Throws DuplicateVariable if the name is already declared (of either
  /// kind).
  void declare(const std::string& name, VarKind kind);

  std::optional<VariableRef> find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name).has_value(); }

  const std::vector<std::string>& names(VarKind kind) const {
    return kind == VarKind::stochastic ? stochastic_ : decision_;
  }
  int size(VarKind kind) const { return static_cast<int>(names(kind).size()); }
  Mask all(VarKind kind) const;
  const std::string& name(VarKind kind, int index) const {
    return names(kind)[static_cast<std::size_t>(index)];
  }

  std::vector<VariableDecl> declarations() const;

  friend bool operator==(const Universe& a, const Universe& b) {
    return a.stochastic_ == b.stochastic_ && a.decision_ == b.decision_;
  }

 private:
  std::vector<std::string> stochastic_;
  std::vector<std::string> decision_;
  std::unordered_map<std::string, VariableRef> index_;
};

struct VarSet {
  Mask stoch = 0;
  Mask dec = 0;

  bool empty() const { return stoch == 0 && dec == 0; }
  bool subset_of(const VarSet& o) const {
    return (stoch & ~o.stoch) == 0 && (dec & ~o.dec) == 0;
  }
  bool intersects(const VarSet& o) const {
    return (stoch & o.stoch) != 0 || (dec & o.dec) != 0;
  }

  friend VarSet operator|(VarSet a, VarSet b) {
    return {a.stoch | b.stoch, a.dec | b.dec};
  }
  friend VarSet operator&(VarSet a, VarSet b) {
    return {a.stoch & b.stoch, a.dec & b.dec};
  }
  /// Set difference.
  friend VarSet operator-(VarSet a, VarSet b) {
    return {a.stoch & ~b.stoch, a.dec & ~b.dec};
  }

  auto operator<=>(const VarSet&) const = default;
};

inline VarSet stochastic_set(Mask m) { return {m, 0}; }
inline VarSet decision_set(Mask m) { return {0, m}; }

/// Least upper bound in the join semilattice: slot-wise set union.
inline VarSet join(VarSet a, VarSet b) { return a | b; }

/// `left ⊥ right | cond`. Slots may mix stochastic and decision variables;
/// admissibility of a particular mix is decided by well_formed() and by the
/// rule set in use.
struct CIStatement {
  VarSet left;
  VarSet right;
  VarSet cond;

  VarSet decision_vars() const {
    return decision_set(left.dec | right.dec | cond.dec);
  }
  VarSet all_vars() const { return left | right | cond; }
  /// Decision variables in the left slot make this a general-form statement.
  bool is_general() const { return left.dec != 0; }
  bool is_pure_stochastic() const { return decision_vars().empty(); }
  bool is_pure_decision() const {
    return (left.stoch | right.stoch | cond.stoch) == 0;
  }

  auto operator<=>(const CIStatement&) const = default;
};

struct VarSetHash {
  std::size_t operator()(const VarSet& v) const noexcept;
};
struct CIStatementHash {
  std::size_t operator()(const CIStatement& s) const noexcept;
};

/// A statement as written: slot contents by name, possibly unsorted and
/// with duplicates.
struct RawStatement {
  std::vector<std::string> left;
  std::vector<std::string> right;
  std::vector<std::string> cond;
};

/// Throws UnknownVariable for undeclared names.
VarSet resolve(const Universe& u, const std::vector<std::string>& names);
std::vector<std::string> names_of(const Universe& u, VarSet v);

CIStatement canonicalize(const Universe& u, const RawStatement& raw);
RawStatement to_raw(const Universe& u, const CIStatement& s);

/// Maps a statement between universes by name (throws UnknownVariable if a
/// name is missing from `to`).
CIStatement rebind(const CIStatement& s, const Universe& from,
                   const Universe& to);

/// Renders in the DSL syntax, e.g. "X, Z _||_ Y | Z". An empty conditioning
/// slot is omitted.
std::string render(const Universe& u, const CIStatement& s);
std::string render(const Universe& u, VarSet v);

/// Registered functional reductions W ⪯ Y between variables of one kind.
/// Queries use the reflexive-transitive closure of the registered pairs.
class ReductionRegistry {
 public:
  /// Throws KindMismatch when the two variables are of different kinds and
  /// UnknownVariable when either is undeclared.
  void add(const Universe& u, std::string_view reduced, std::string_view of);

  bool reduces(VarKind kind, int reduced, int of) const;
  /// All variables ⪯ some member of `of` (including the members).
  Mask down(VarKind kind, Mask of) const;
  VarSet down(VarSet of) const {
    return {down(VarKind::stochastic, of.stoch), down(VarKind::decision, of.dec)};
  }

  struct Pair {
    VarKind kind;
    int reduced;
    int of;
  };
  const std::vector<Pair>& pairs() const { return pairs_; }

 private:
  void recompute(VarKind kind);

  std::vector<Pair> pairs_;
  // below_[kind][i]: variables reachable downwards from i (closure, incl. i).
  std::vector<Mask> below_[2];
};

/// True iff every variable of `w` is ⪯ some variable of `y` (membership
/// counting as the reflexive case).
bool is_reduction(VarSet w, VarSet y, const ReductionRegistry& reg);

/// Declared complementary families of decision variables. Adding variables
/// to a complementary family keeps it complementary, so a decision set is
/// accepted when it contains at least one declared family.
class ComplementarityDecl {
 public:
  void add(Mask family);
  bool covers(Mask decision) const;
  const std::vector<Mask>& families() const { return families_; }

 private:
  std::vector<Mask> families_;
};

/// Non-empty outer slots, and the statement's decision variables are either
/// absent or cover a declared complementary family. When `allow_general` is
/// false, decision variables in the left slot are rejected.
bool well_formed(const CIStatement& s, const ComplementarityDecl& comp,
                 bool allow_general = true);

/// Equivalence x ≈ y: reduction in both directions.
bool equivalent(VarSet a, VarSet b, const ReductionRegistry& reg);

/// Iterates over all submasks of `m` (including 0 and m), in increasing
/// numeric order.
template <class F>
void for_each_submask(Mask m, F&& f) {
  Mask s = 0;
  while (true) {
    f(s);
    if (s == m) break;
    s = ((s | ~m) + 1) & m;
  }
}

inline int popcount(Mask m) { return __builtin_popcountll(m); }

}  // namespace eci
