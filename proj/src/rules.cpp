#include "eci/rules.hpp"

#include "eci/error.hpp"

#include <algorithm>
#include <array>

namespace eci {

namespace {

struct RuleInfo {
  RuleId id;
  std::string_view name;
  int arity;
};

constexpr std::array<RuleInfo, 19> kRules{{
    {RuleId::P1, "P1", 1},     {RuleId::P2, "P2", 0},     {RuleId::P3, "P3", 1},
    {RuleId::P4, "P4", 1},     {RuleId::P5, "P5", 2},     {RuleId::P1r, "P1'", 1},
    {RuleId::P2r, "P2'", 0},   {RuleId::P3r, "P3'", 1},   {RuleId::P4r, "P4'", 1},
    {RuleId::P5r, "P5'", 2},   {RuleId::P3m, "P3''", 1},  {RuleId::P4m, "P4''", 1},
    {RuleId::P5m, "P5''", 2},  {RuleId::DEC, "DEC", 1},   {RuleId::P1g, "P1g", 1},
    {RuleId::P2g, "P2g", 0},   {RuleId::P3g, "P3g", 1},   {RuleId::P4g, "P4g", 1},
    {RuleId::P5g, "P5g", 2},
}};

constexpr std::array<std::string_view, 4> kFlagNames{
    "discrete_regime_space", "discrete_variables", "dominating_regime", "pairwise_semantics"};

constexpr std::array<std::string_view, 4> kRuleSetNames{"SEPAROID_FULL", "VCI_STRONG",
                                                        "ECI_RESTRICTED", "GENERAL"};

const RuleInfo& info(RuleId id) { return kRules[static_cast<std::size_t>(id)]; }

}  // namespace

std::string_view rule_name(RuleId id) { return info(id).name; }

std::optional<RuleId> rule_from_name(std::string_view name) {
  for (const auto& r : kRules)
    if (r.name == name) return r.id;
  return std::nullopt;
}

int rule_arity(RuleId id) { return info(id).arity; }

std::string_view flag_name(Flag f) { return kFlagNames[static_cast<std::size_t>(f)]; }

std::optional<Flag> flag_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kFlagNames.size(); ++i)
    if (kFlagNames[i] == name) return static_cast<Flag>(i);
  return std::nullopt;
}

std::optional<Flag> Flags::first() const {
  for (std::size_t i = 0; i < kFlagNames.size(); ++i)
    if (has(static_cast<Flag>(i))) return static_cast<Flag>(i);
  return std::nullopt;
}

std::vector<Flag> Flags::list() const {
  std::vector<Flag> out;
  for (std::size_t i = 0; i < kFlagNames.size(); ++i)
    if (has(static_cast<Flag>(i))) out.push_back(static_cast<Flag>(i));
  return out;
}

std::string_view rule_set_name(RuleSetName n) { return kRuleSetNames[static_cast<std::size_t>(n)]; }

std::optional<RuleSetName> rule_set_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kRuleSetNames.size(); ++i)
    if (kRuleSetNames[i] == name) return static_cast<RuleSetName>(i);
  return std::nullopt;
}

RuleSet RuleSet::make(RuleSetName name, Flags flags) {
  RuleSet rs;
  rs.name = name;
  rs.flags = flags;
  using R = RuleId;
  switch (name) {
    case RuleSetName::separoid_full:
    case RuleSetName::vci_strong:
      rs.rules = {R::P1, R::P2, R::P3, R::P4, R::P5};
      break;
    case RuleSetName::eci_restricted:
      rs.rules = {R::P1r, R::P2r, R::P3r, R::P4r, R::P5r, R::P3m, R::P4m, R::P5m, R::DEC};
      break;
    case RuleSetName::general:
      rs.rules = {R::P1g, R::P2g, R::P3g, R::P4g, R::P5g};
      break;
  }
  return rs;
}

RuleSet RuleSet::named(std::string_view name, Flags flags) {
  auto n = rule_set_from_name(name);
  if (!n) throw Error(ErrorCode::invalid_argument, "unknown rule set '" + std::string(name) + "'");
  return make(*n, flags);
}

bool RuleSet::contains(RuleId id) const {
  return std::find(rules.begin(), rules.end(), id) != rules.end();
}

int RuleSet::rank(RuleId id) const {
  auto it = std::find(rules.begin(), rules.end(), id);
  return it == rules.end() ? static_cast<int>(rules.size()) : static_cast<int>(it - rules.begin());
}

bool admissible(const RuleSet& rs, const CIStatement& s, const ComplementarityDecl& comp) {
  if (s.left.empty() || s.right.empty()) return false;
  switch (rs.name) {
    case RuleSetName::separoid_full:
      return s.is_pure_stochastic() || s.is_pure_decision();
    case RuleSetName::vci_strong:
      return s.is_pure_decision();
    case RuleSetName::eci_restricted:
      return well_formed(s, comp, false);
    case RuleSetName::general:
      return well_formed(s, comp, true);
  }
  return false;
}

bool guard(RuleId id, const CIStatement& p) {
  switch (id) {
    case RuleId::P1r:
      return p.left.dec == 0 && p.right.dec == 0;
    case RuleId::P3r:
    case RuleId::P4r:
    case RuleId::P5r:
    case RuleId::P3m:
    case RuleId::P4m:
    case RuleId::P5m:
    case RuleId::DEC:
      return p.left.dec == 0;
    default:
      return true;
  }
}

// ---------------------------------------------------------------------------

void StatementIndex::insert(const CIStatement& s) {
  if (!members_.emplace(s, 0).second) return;
  left_cond_[{s.left, s.cond}].push_back(s);
  left_span_[{s.left, s.right | s.cond}].push_back(s);
  right_cond_[{s.right, s.cond}].push_back(s);
  right_span_[{s.right, s.left | s.cond}].push_back(s);
}

std::span<const CIStatement> StatementIndex::lookup(const Map& m, VarSet a, VarSet b) {
  auto it = m.find({a, b});
  if (it == m.end()) return {};
  return it->second;
}

std::span<const CIStatement> StatementIndex::by_left_cond(VarSet l, VarSet c) const {
  return lookup(left_cond_, l, c);
}
std::span<const CIStatement> StatementIndex::by_left_span(VarSet l, VarSet s) const {
  return lookup(left_span_, l, s);
}
std::span<const CIStatement> StatementIndex::by_right_cond(VarSet r, VarSet c) const {
  return lookup(right_cond_, r, c);
}
std::span<const CIStatement> StatementIndex::by_right_span(VarSet r, VarSet s) const {
  return lookup(right_span_, r, s);
}

// ---------------------------------------------------------------------------

namespace {

class Firing {
 public:
  Firing(const RuleContext& ctx, const Emit& emit) : ctx_(ctx), emit_(emit) {}

  void out(const CIStatement& c, std::initializer_list<CIStatement> premises,
           std::optional<Flag> license = std::nullopt) const {
    if (!admissible(ctx_.rules, c, ctx_.complements)) return;
    std::vector<CIStatement> ps(premises);
    emit_(c, ps, license);
  }

  const RuleContext& ctx() const { return ctx_; }

 private:
  const RuleContext& ctx_;
  const Emit& emit_;
};

// Axioms ------------------------------------------------------------------

void fire_p2(const Firing& f) {
  const Universe& u = f.ctx().universe;
  const bool stoch = f.ctx().rules.name == RuleSetName::separoid_full;
  auto per_kind = [&](Mask all, auto make) {
    for_each_submask(all, [&](Mask x) {
      if (x == 0) return;
      for_each_submask(all, [&](Mask y) {
        if (y == 0) return;
        f.out({make(x), make(y), make(y)}, {});
      });
    });
  };
  if (stoch) per_kind(u.all(VarKind::stochastic), stochastic_set);
  per_kind(u.all(VarKind::decision), decision_set);
}

void fire_p2r(const Firing& f) {
  const Universe& u = f.ctx().universe;
  const auto& comp = f.ctx().complements;
  const Mask S = u.all(VarKind::stochastic);
  const Mask D = u.all(VarKind::decision);
  // Pure stochastic instances are left out: without decision variables the
  // statement would claim a common conditional across all regimes.
  for_each_submask(D, [&](Mask d) {
    if (d == 0 || !comp.covers(d)) return;
    for_each_submask(S, [&](Mask y) {
      const VarSet r{y, d};
      for_each_submask(S, [&](Mask x) {
        if (x == 0) return;
        f.out({stochastic_set(x), r, r}, {});
      });
    });
  });
}

void fire_p2g(const Firing& f) {
  const Universe& u = f.ctx().universe;
  const auto& comp = f.ctx().complements;
  const Mask S = u.all(VarKind::stochastic);
  const Mask D = u.all(VarKind::decision);
  for_each_submask(D, [&](Mask k) {
    for_each_submask(D, [&](Mask t) {
      const Mask dec = k | t;
      if (dec == 0 || !comp.covers(dec)) return;
      for_each_submask(S, [&](Mask y) {
        if (y == 0 && t == 0) return;
        const VarSet r{y, t};
        for_each_submask(S, [&](Mask x) {
          if (x == 0 && k == 0) return;
          f.out({VarSet{x, k}, r, r}, {});
        });
      });
    });
  });
}

// Unary rules -------------------------------------------------------------

void fire_unary_impl(RuleId id, const CIStatement& s, const Firing& f) {
  const auto& reg = f.ctx().reductions;
  const auto& flags = f.ctx().rules.flags;
  switch (id) {
    case RuleId::P1:
    case RuleId::P1r:
    case RuleId::P1g:
      f.out({s.right, s.left, s.cond}, {s});
      return;

    case RuleId::P3: {
      // x ⊥ y | z, w ⪯ y  ⇒  x ⊥ w | z
      const VarSet d = reg.down(s.right);
      for_each_submask(d.stoch, [&](Mask ws) {
        for_each_submask(d.dec, [&](Mask wd) {
          const VarSet w{ws, wd};
          if (w.empty() || w == s.right) return;
          f.out({s.left, w, s.cond}, {s});
        });
      });
      return;
    }
    case RuleId::P4: {
      // x ⊥ y | z, w ⪯ y  ⇒  x ⊥ y | z ∨ w
      const VarSet d = reg.down(s.right);
      for_each_submask(d.stoch, [&](Mask ws) {
        for_each_submask(d.dec, [&](Mask wd) {
          const VarSet w{ws, wd};
          if (w.empty() || w.subset_of(s.cond)) return;
          f.out({s.left, s.right, s.cond | w}, {s});
        });
      });
      return;
    }

    case RuleId::P3r:
    case RuleId::P3g: {
      // X ⊥ (Y,Θ) | C, W ⪯ Y  ⇒  X ⊥ (W,Θ) | C
      const Mask d = reg.down(VarKind::stochastic, s.right.stoch);
      for_each_submask(d, [&](Mask w) {
        if (w == s.right.stoch) return;
        const VarSet r{w, s.right.dec};
        if (r.empty()) return;
        f.out({s.left, r, s.cond}, {s});
      });
      return;
    }
    case RuleId::P4r: {
      // X ⊥ (Y,Θ) | (Z,Φ), W ⪯ Y  ⇒  X ⊥ (Y,Θ) | (Z,W,Φ)
      const Mask d = reg.down(VarKind::stochastic, s.right.stoch);
      for_each_submask(d, [&](Mask w) {
        if ((w & ~s.cond.stoch) == 0) return;
        f.out({s.left, s.right, s.cond | stochastic_set(w)}, {s});
      });
      return;
    }
    case RuleId::P4g: {
      // (X,K) ⊥ (Y,Θ) | (Z,Φ), W ⪯ Y  ⇒  (X,K) ⊥ Y | (Z,W,Φ,Θ)
      const auto lic = flags.first();
      if (!lic || s.right.stoch == 0) return;
      const Mask d = reg.down(VarKind::stochastic, s.right.stoch);
      for_each_submask(d, [&](Mask w) {
        const VarSet c = s.cond | VarSet{w, s.right.dec};
        const CIStatement out{s.left, stochastic_set(s.right.stoch), c};
        if (out == s) return;
        f.out(out, {s}, lic);
      });
      return;
    }

    case RuleId::P3m: {
      // X ⊥ R | C, W ⪯ X  ⇒  W ⊥ R | C
      const Mask d = reg.down(VarKind::stochastic, s.left.stoch);
      for_each_submask(d, [&](Mask w) {
        if (w == 0 || w == s.left.stoch) return;
        f.out({stochastic_set(w), s.right, s.cond}, {s});
      });
      return;
    }
    case RuleId::P4m: {
      // X ⊥ R | C, W ⪯ X  ⇒  X ⊥ R | C ∨ W   (needs a licensing flag)
      const auto lic = flags.first();
      if (!lic) return;
      const Mask d = reg.down(VarKind::stochastic, s.left.stoch);
      for_each_submask(d, [&](Mask w) {
        if ((w & ~s.cond.stoch) == 0) return;
        f.out({s.left, s.right, s.cond | stochastic_set(w)}, {s}, lic);
      });
      return;
    }

    case RuleId::DEC: {
      for_each_submask(s.right.dec, [&](Mask t) {
        if (t == 0) return;
        const VarSet r = s.right - decision_set(t);
        if (r.empty()) return;
        f.out({s.left, r, s.cond | decision_set(t)}, {s});
      });
      return;
    }
    default:
      return;
  }
}

// Binary rules ------------------------------------------------------------

// Separoid contraction, restricted to instances with y ∩ z = ∅ and w ∩ y = ∅.
// The degenerate instances add nothing to the closure (they follow from the
// remaining rules) but create spurious shortcuts in minimal derivations.
bool p5_nondegenerate(const CIStatement& first, const CIStatement& second) {
  return !first.right.intersects(first.cond) && !second.right.intersects(first.right);
}

void fire_binary_impl(RuleId id, const CIStatement& s, const StatementIndex& idx,
                      const Firing& f, bool as_first, bool as_second) {
  switch (id) {
    case RuleId::P5:
    case RuleId::P5r:
    case RuleId::P5g: {
      // x ⊥ y | z,  x ⊥ w | y ∨ z  ⇒  x ⊥ y ∨ w | z
      const bool restricted = id == RuleId::P5;
      // ECI forms need a stochastic w.
      auto second_ok = [&](const CIStatement& p) {
        return id == RuleId::P5 || p.right.dec == 0;
      };
      if (as_first) {
        for (const auto& p : idx.by_left_cond(s.left, s.right | s.cond)) {
          if (!second_ok(p)) continue;
          if (restricted && !p5_nondegenerate(s, p)) continue;
          f.out({s.left, s.right | p.right, s.cond}, {s, p});
        }
      }
      if (as_second && second_ok(s)) {
        for (const auto& q : idx.by_left_span(s.left, s.cond)) {
          if (restricted && !p5_nondegenerate(q, s)) continue;
          f.out({q.left, q.right | s.right, q.cond}, {q, s});
        }
      }
      return;
    }
    case RuleId::P5m: {
      // X ⊥ R | C,  W ⊥ R | X ∨ C  ⇒  (X,W) ⊥ R | C
      if (as_first) {
        for (const auto& p : idx.by_right_cond(s.right, s.left | s.cond)) {
          if (p.left.dec != 0) continue;
          f.out({s.left | p.left, s.right, s.cond}, {s, p});
        }
      }
      if (as_second && s.left.dec == 0) {
        for (const auto& q : idx.by_right_span(s.right, s.cond)) {
          if (q.left.dec != 0) continue;
          f.out({q.left | s.left, q.right, q.cond}, {q, s});
        }
      }
      return;
    }
    default:
      return;
  }
}

}  // namespace

void fire_axioms(RuleId id, const RuleContext& ctx, const Emit& emit) {
  Firing f(ctx, emit);
  switch (id) {
    case RuleId::P2: fire_p2(f); return;
    case RuleId::P2r: fire_p2r(f); return;
    case RuleId::P2g: fire_p2g(f); return;
    default: return;
  }
}

void fire_unary(RuleId id, const CIStatement& premise, const RuleContext& ctx,
                const Emit& emit) {
  if (rule_arity(id) != 1 || !guard(id, premise)) return;
  if (!admissible(ctx.rules, premise, ctx.complements)) return;
  fire_unary_impl(id, premise, Firing(ctx, emit));
}

void fire_binary(RuleId id, const CIStatement& s, const StatementIndex& index,
                 const RuleContext& ctx, const Emit& emit, bool as_first, bool as_second) {
  if (rule_arity(id) != 2 || !guard(id, s)) return;
  if (!admissible(ctx.rules, s, ctx.complements)) return;
  fire_binary_impl(id, s, index, Firing(ctx, emit), as_first, as_second);
}

std::vector<CIStatement> apply_rule(RuleId rule, const std::vector<CIStatement>& known,
                                    const RuleContext& ctx) {
  if (!ctx.rules.contains(rule))
    throw Error(ErrorCode::guard_violation, "rule " + std::string(rule_name(rule)) +
                                                " is not part of " +
                                                std::string(rule_set_name(ctx.rules.name)));
  for (const auto& s : known) {
    if (!admissible(ctx.rules, s, ctx.complements) || (rule_arity(rule) == 1 && !guard(rule, s)))
      throw Error(ErrorCode::guard_violation, "rule " + std::string(rule_name(rule)) +
                                                  " does not apply to " + render(ctx.universe, s));
  }
  std::vector<CIStatement> out;
  Emit collect = [&](const CIStatement& c, std::span<const CIStatement>, std::optional<Flag>) {
    out.push_back(c);
  };
  switch (rule_arity(rule)) {
    case 0:
      fire_axioms(rule, ctx, collect);
      break;
    case 1:
      for (const auto& s : known) fire_unary(rule, s, ctx, collect);
      break;
    default: {
      StatementIndex idx;
      for (const auto& s : known) idx.insert(s);
      for (const auto& s : known) fire_binary(rule, s, idx, ctx, collect, true, false);
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<CIStatement> conclusions_of(RuleId rule, std::span<const CIStatement> premises,
                                        const RuleContext& ctx) {
  std::vector<CIStatement> out;
  Emit collect = [&](const CIStatement& c, std::span<const CIStatement> ps, std::optional<Flag>) {
    if (std::equal(ps.begin(), ps.end(), premises.begin(), premises.end())) out.push_back(c);
  };
  const int arity = rule_arity(rule);
  if (static_cast<int>(premises.size()) != arity) return out;
  if (arity == 0) {
    fire_axioms(rule, ctx, collect);
  } else if (arity == 1) {
    fire_unary(rule, premises[0], ctx, collect);
  } else {
    StatementIndex idx;
    idx.insert(premises[1]);
    fire_binary(rule, premises[0], idx, ctx, collect, true, false);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace eci
