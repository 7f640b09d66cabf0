#include "eci/search.hpp"

#include "eci/dsl.hpp"
#include "eci/error.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <unordered_map>

namespace eci {

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::mt19937_64 stream(const SearchConfig& cfg, std::uint64_t index) {
  return std::mt19937_64(splitmix(splitmix(cfg.seed) ^ index));
}

// Uniform on [0, n), by rejection; portable across standard libraries.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = kSat - kSat % n;
  std::uint64_t v;
  do v = rng(); while (v >= limit);
  return v % n;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSat / a) return kSat;
  return a * b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kSat) return kSat;
  }
  return static_cast<std::uint64_t>(r);
}

std::vector<Variable> variables_of(const SearchConfig& cfg) {
  std::vector<Variable> vars;
  for (const auto& [name, card] : cfg.var_cardinalities) {
    Variable v{name, {}};
    for (int i = 0; i < card; ++i) v.values.push_back(std::to_string(i));
    vars.push_back(std::move(v));
  }
  return vars;
}

DiscreteDistribution from_masses(std::vector<Variable> vars, const std::vector<std::uint64_t>& m) {
  std::uint64_t total = 0;
  for (auto x : m) total += x;
  std::vector<Rational> pmf;
  pmf.reserve(m.size());
  for (auto x : m) pmf.emplace_back(BigInt(x), BigInt(total));
  return DiscreteDistribution(std::move(vars), std::move(pmf));
}

std::vector<std::uint64_t> random_masses(std::mt19937_64& rng, std::size_t n, int grid) {
  std::vector<std::uint64_t> m(n);
  std::uint64_t total = 0;
  for (auto& x : m) total += x = draw(rng, static_cast<std::uint64_t>(grid) + 1);
  if (total == 0) m[draw(rng, n)] = 1;
  return m;
}

// Compositions of `grid` into n parts, in lexicographic order.
std::vector<std::uint64_t> unrank_composition(std::uint64_t idx, std::size_t n, int grid) {
  std::vector<std::uint64_t> m(n, 0);
  std::uint64_t rem = static_cast<std::uint64_t>(grid);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::uint64_t parts_left = n - i - 1;
    for (std::uint64_t v = 0; v <= rem; ++v) {
      const std::uint64_t cnt = binomial(rem - v + parts_left - 1, parts_left - 1);
      if (idx < cnt) {
        m[i] = v;
        rem -= v;
        break;
      }
      idx -= cnt;
    }
  }
  m[n - 1] = rem;
  return m;
}

std::uint64_t compositions(std::size_t n, int grid) {
  return binomial(static_cast<std::uint64_t>(grid) + n - 1, n - 1);
}

std::vector<std::string> regime_names(int count) {
  std::vector<std::string> r;
  for (int i = 0; i < count; ++i) r.push_back("s" + std::to_string(i));
  return r;
}

DecisionVar decision_with(const std::string& name, int card, std::vector<int> value) {
  DecisionVar d{name, {}, std::move(value)};
  for (int i = 0; i < card; ++i) d.labels.push_back(std::to_string(i));
  return d;
}

RegimeFamily assemble(const SearchConfig& cfg, std::vector<DiscreteDistribution> dists,
                      std::vector<DecisionVar> decs) {
  std::vector<DecisionVar> all;
  if (cfg.include_identity) {
    std::vector<int> id(static_cast<std::size_t>(cfg.regime_count));
    for (int r = 0; r < cfg.regime_count; ++r) id[static_cast<std::size_t>(r)] = r;
    DecisionVar sigma{"Sigma", regime_names(cfg.regime_count), std::move(id)};
    all.push_back(std::move(sigma));
  }
  for (auto& d : decs) all.push_back(std::move(d));
  return RegimeFamily(regime_names(cfg.regime_count), std::move(dists), std::move(all));
}

}  // namespace

void SearchConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::invalid_argument, m); };
  if (trials < 1) bad("trials must be at least 1");
  if (grid < 1) bad("probability grid must be at least 1");
  if (regime_count < 1) bad("regime count must be at least 1");
  for (const auto& [n, c] : var_cardinalities)
    if (c < 1) bad("variable '" + n + "' needs at least one value");
  for (const auto& [n, c] : decision_cardinalities)
    if (c < 1) bad("decision variable '" + n + "' needs at least one value");
}

DiscreteDistribution random_distribution(const SearchConfig& cfg, std::uint64_t index) {
  cfg.validate();
  auto rng = stream(cfg, index);
  auto vars = variables_of(cfg);
  const std::size_t n = atom_count(vars);
  return from_masses(std::move(vars), random_masses(rng, n, cfg.grid));
}

RegimeFamily random_family(const SearchConfig& cfg, std::uint64_t index) {
  cfg.validate();
  auto rng = stream(cfg, index);
  const auto vars = variables_of(cfg);
  const std::size_t n = atom_count(vars);
  std::vector<DiscreteDistribution> dists;
  for (int r = 0; r < cfg.regime_count; ++r) dists.push_back(from_masses(vars, random_masses(rng, n, cfg.grid)));
  std::vector<DecisionVar> decs;
  for (const auto& [name, card] : cfg.decision_cardinalities) {
    std::vector<int> value;
    for (int r = 0; r < cfg.regime_count; ++r)
      value.push_back(static_cast<int>(draw(rng, static_cast<std::uint64_t>(card))));
    decs.push_back(decision_with(name, card, std::move(value)));
  }
  return assemble(cfg, std::move(dists), std::move(decs));
}

std::uint64_t exhaustive_count(const SearchConfig& cfg, bool family) {
  cfg.validate();
  const std::uint64_t per = compositions(atom_count(variables_of(cfg)), cfg.grid);
  if (!family) return per;
  std::uint64_t total = 1;
  for (int r = 0; r < cfg.regime_count; ++r) total = sat_mul(total, per);
  for (const auto& [name, card] : cfg.decision_cardinalities)
    for (int r = 0; r < cfg.regime_count; ++r) total = sat_mul(total, static_cast<std::uint64_t>(card));
  return total;
}

DiscreteDistribution distribution_at(const SearchConfig& cfg, std::uint64_t index) {
  cfg.validate();
  auto vars = variables_of(cfg);
  const std::size_t n = atom_count(vars);
  if (index >= compositions(n, cfg.grid))
    throw Error(ErrorCode::invalid_argument, "grid index out of range");
  return from_masses(std::move(vars), unrank_composition(index, n, cfg.grid));
}

// Decision functions vary fastest, then regime s0's pmf, then s1's, ...
RegimeFamily family_at(const SearchConfig& cfg, std::uint64_t index) {
  if (index >= exhaustive_count(cfg, true))
    throw Error(ErrorCode::invalid_argument, "grid index out of range");
  const auto vars = variables_of(cfg);
  const std::size_t n = atom_count(vars);
  std::vector<DecisionVar> decs;
  for (const auto& [name, card] : cfg.decision_cardinalities) {
    std::vector<int> value;
    for (int r = 0; r < cfg.regime_count; ++r) {
      value.push_back(static_cast<int>(index % static_cast<std::uint64_t>(card)));
      index /= static_cast<std::uint64_t>(card);
    }
    decs.push_back(decision_with(name, card, std::move(value)));
  }
  const std::uint64_t per = compositions(n, cfg.grid);
  std::vector<DiscreteDistribution> dists;
  for (int r = 0; r < cfg.regime_count; ++r) {
    dists.push_back(from_masses(vars, unrank_composition(index % per, n, cfg.grid)));
    index /= per;
  }
  return assemble(cfg, std::move(dists), std::move(decs));
}

std::string_view semantics_name(Semantics s) {
  switch (s) {
    case Semantics::sci: return "SCI";
    case Semantics::vci: return "VCI";
    case Semantics::eci: return "ECI";
  }
  return "?";
}

std::optional<Semantics> semantics_from_name(std::string_view name) {
  std::string up(name);
  for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "SCI") return Semantics::sci;
  if (up == "VCI") return Semantics::vci;
  if (up == "ECI") return Semantics::eci;
  return std::nullopt;
}

namespace {

void require_fit(const CIStatement& s, Semantics sem, const Universe& u) {
  const bool ok = sem == Semantics::eci || (sem == Semantics::sci && s.is_pure_stochastic()) ||
                  (sem == Semantics::vci && s.is_pure_decision());
  if (!ok)
    throw Error(ErrorCode::semantics_mismatch, render(u, s) + " does not fit " +
                                                   std::string(semantics_name(sem)) + " semantics");
}

}  // namespace

bool evaluate(const RegimeFamily& fam, const CIStatement& s, Semantics sem) {
  switch (sem) {
    case Semantics::sci:
      for (const auto& d : fam.dists())
        if (!check_sci(d, s)) return false;
      return true;
    case Semantics::vci:
      return check_vci(fam, s);
    case Semantics::eci:
      return s.is_general() ? check_eci_general(fam, s) : check_eci(fam, s).holds;
  }
  return false;
}

Json Counterexample::serialized() const {
  Json j = model_to_json(model);
  j["report"] = report;
  return j;
}

std::optional<Counterexample> search_counterexample(const Universe& u,
                                                    const std::vector<CIStatement>& premises,
                                                    const CIStatement& goal,
                                                    const SearchConfig& base, Semantics sem) {
  for (const auto& p : premises) require_fit(p, sem, u);
  require_fit(goal, sem, u);

  SearchConfig cfg = base;
  auto has = [](const auto& list, const std::string& n) {
    return std::any_of(list.begin(), list.end(), [&](const auto& e) { return e.first == n; });
  };
  if (sem != Semantics::vci)
    for (const auto& n : u.names(VarKind::stochastic))
      if (!has(cfg.var_cardinalities, n)) cfg.var_cardinalities.emplace_back(n, 2);
  if (sem != Semantics::sci)
    for (const auto& n : u.names(VarKind::decision))
      if (!has(cfg.decision_cardinalities, n) && !(cfg.include_identity && n == "Sigma"))
        cfg.decision_cardinalities.emplace_back(n, 2);
  if (sem == Semantics::sci) {
    cfg.regime_count = 1;
    cfg.include_identity = false;
    cfg.decision_cardinalities.clear();
  }
  cfg.validate();

  const bool family = sem != Semantics::sci;
  const std::uint64_t limit =
      cfg.exhaustive ? std::min(cfg.trials, exhaustive_count(cfg, family)) : cfg.trials;
  for (std::uint64_t t = 0; t < limit; ++t) {
    Model m;
    if (family) {
      m.family = cfg.exhaustive ? family_at(cfg, t) : random_family(cfg, t);
    } else {
      m = single_model(cfg.exhaustive ? distribution_at(cfg, t) : random_distribution(cfg, t));
    }
    const Universe mu = universe_of(m.family);
    Json ps = Json::array();
    bool all = true;
    try {
      for (const auto& p : premises) {
        const CIStatement q = rebind(p, u, mu);
        if (!evaluate(m.family, q, sem)) {
          all = false;
          break;
        }
        ps.push_back({{"statement", render(mu, q)}, {"holds", true}});
      }
      if (!all) continue;
      const CIStatement g = rebind(goal, u, mu);
      if (evaluate(m.family, g, sem)) continue;
      Counterexample cx;
      cx.trial = t;
      cx.report = {{"semantics", semantics_name(sem)},
                   {"trial", t},
                   {"premises", ps},
                   {"goal", {{"statement", render(mu, g)}, {"holds", false}}}};
      cx.model = std::move(m);
      return cx;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::not_complementary) continue;
      throw;
    }
  }
  return std::nullopt;
}

bool verify_counterexample(const Json& j, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (!j.is_object() || !j.contains("report")) return fail("no report attached");
  const Json& rep = j.at("report");
  const auto sem = semantics_from_name(rep.value("semantics", ""));
  if (!sem) return fail("unknown semantics");
  const Model m = model_from_json(j);
  const Universe u = universe_of(m.family);
  for (const auto& p : rep.at("premises")) {
    const std::string text = p.at("statement").get<std::string>();
    if (!evaluate(m.family, parse_statement(u, text), *sem)) return fail("premise fails: " + text);
  }
  const std::string goal = rep.at("goal").at("statement").get<std::string>();
  if (evaluate(m.family, parse_statement(u, goal), *sem)) return fail("goal holds: " + goal);
  return true;
}

Json ScanReport::to_json() const {
  Json j = {{"models", models}, {"instances", instances}, {"violations", violations}};
  j["first_violation"] = first_violation ? *first_violation : Json(nullptr);
  return j;
}

namespace {

// Truth of a statement on the scanned model, memoized.
class Oracle {
 public:
  Oracle(const RegimeFamily& fam, RuleSetName rs) : fam_(fam), rs_(rs) {}

  /// Empty when the statement has no meaning on this model (its decision
  /// variables do not separate the regimes).
  std::optional<bool> operator()(const CIStatement& s) {
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    const auto v = compute(s);
    memo_.emplace(s, v);
    return v;
  }

 private:
  std::optional<bool> compute(const CIStatement& s) const {
    if (s.is_pure_decision()) return check_vci(fam_, s);
    if (s.is_pure_stochastic() && rs_ == RuleSetName::separoid_full)
      return evaluate(fam_, s, Semantics::sci);
    try {
      return evaluate(fam_, s, Semantics::eci);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::not_complementary) return std::nullopt;
      throw;
    }
  }

  const RegimeFamily& fam_;
  RuleSetName rs_;
  std::unordered_map<CIStatement, std::optional<bool>, CIStatementHash> memo_;
};

// Whether every Φ-group of regimes has a dominating regime.
bool dominated_per_group(const RegimeFamily& fam, Mask phi) {
  std::map<std::uint64_t, std::vector<int>> groups;
  for (int r = 0; r < fam.regime_count(); ++r) groups[fam.decision_code(phi, r)].push_back(r);
  for (const auto& [code, rs] : groups)
    if (!find_dominating(fam, rs)) return false;
  return true;
}

bool hypothesis_holds(Flag f, const RegimeFamily& fam, const CIStatement& premise) {
  switch (f) {
    case Flag::dominating_regime:
      return dominated_per_group(fam, premise.cond.dec);
    default:
      // Finite models: discrete variables and regime space; pairwise and
      // full ECI agree.
      return true;
  }
}

std::vector<int> codes(const RegimeFamily& fam, Mask dec) {
  std::vector<int> c;
  for (int r = 0; r < fam.regime_count(); ++r) c.push_back(static_cast<int>(fam.decision_code(dec, r)));
  return c;
}

bool is_function_of(const std::vector<int>& z, const std::vector<int>& y) {
  std::map<int, int> f;
  for (std::size_t i = 0; i < y.size(); ++i) {
    auto [it, fresh] = f.emplace(y[i], z[i]);
    if (!fresh && it->second != z[i]) return false;
  }
  return true;
}

// x ⊥ y | m for decision variables given by their per-regime codes.
bool vci_codes(const std::vector<int>& x, const std::vector<int>& y, const std::vector<int>& m) {
  std::map<int, std::set<int>> by_m;
  std::map<std::pair<int, int>, std::set<int>> by_ym;
  for (std::size_t r = 0; r < x.size(); ++r) {
    by_m[m[r]].insert(x[r]);
    by_ym[{y[r], m[r]}].insert(x[r]);
  }
  for (const auto& [key, xs] : by_ym)
    if (xs != by_m[key.second]) return false;
  return true;
}

}  // namespace

ScanReport axiom_soundness_scan(const SearchConfig& base, const RuleSet& rs) {
  SearchConfig cfg = base;
  const bool family = rs.name != RuleSetName::separoid_full || !cfg.decision_cardinalities.empty() ||
                      cfg.regime_count > 1;
  if (!family) cfg.include_identity = false;
  cfg.validate();
  const std::uint64_t limit =
      cfg.exhaustive ? std::min(cfg.trials, exhaustive_count(cfg, family)) : cfg.trials;

  ScanReport report;
  for (std::uint64_t t = 0; t < limit; ++t) {
    Model m;
    if (family) {
      m.family = cfg.exhaustive ? family_at(cfg, t) : random_family(cfg, t);
    } else {
      m = single_model(cfg.exhaustive ? distribution_at(cfg, t) : random_distribution(cfg, t));
    }
    const RegimeFamily& fam = m.family;
    ++report.models;

    const Universe u = universe_of(fam);
    const Mask S = u.all(VarKind::stochastic);
    const Mask D = u.all(VarKind::decision);
    ComplementarityDecl comp;
    for_each_submask(D, [&](Mask d) {
      if (d != 0 && check_complementary(fam, d)) comp.add(d);
    });
    ReductionRegistry reg;
    const RuleContext ctx{u, reg, comp, rs};
    Oracle truth(fam, rs.name);

    StatementIndex known;
    std::vector<CIStatement> order;
    for_each_submask(S, [&](Mask ls) {
      for_each_submask(D, [&](Mask ld) {
        const VarSet left{ls, ld};
        if (left.empty()) return;
        for_each_submask(S, [&](Mask rs_) {
          for_each_submask(D, [&](Mask rd) {
            const VarSet right{rs_, rd};
            if (right.empty()) return;
            for_each_submask(S, [&](Mask cs) {
              for_each_submask(D, [&](Mask cd) {
                const CIStatement s{left, right, {cs, cd}};
                if (!admissible(rs, s, comp)) return;
                if (truth(s).value_or(false)) {
                  known.insert(s);
                  order.push_back(s);
                }
              });
            });
          });
        });
      });
    });

    auto record = [&](const std::string& rule, std::span<const CIStatement> ps,
                      const std::string& conclusion) {
      ++report.violations;
      if (report.first_violation) return;
      Json pj = Json::array();
      for (const auto& p : ps) pj.push_back(render(u, p));
      report.first_violation = Json{{"trial", t},
                                    {"rule", rule},
                                    {"premises", pj},
                                    {"conclusion", conclusion},
                                    {"model", model_to_json(m)}};
    };

    for (RuleId id : rs.rules) {
      Emit check = [&](const CIStatement& c, std::span<const CIStatement> ps,
                       std::optional<Flag> license) {
        if (license && !hypothesis_holds(*license, fam, ps[0])) return;
        ++report.instances;
        if (!truth(c).value_or(false)) record(std::string(rule_name(id)), ps, render(u, c));
      };
      switch (rule_arity(id)) {
        case 0:
          fire_axioms(id, ctx, check);
          break;
        case 1:
          for (const auto& s : order) fire_unary(id, s, ctx, check);
          break;
        default:
          for (const auto& s : order) fire_binary(id, s, known, ctx, check, true, false);
          break;
      }
    }

    if (rs.name == RuleSetName::vci_strong) {
      // P6: z ⪯ y, w ⪯ y, x ⊥ y | z, x ⊥ y | w  ⇒  x ⊥ y | z ∧ w
      std::map<std::pair<Mask, Mask>, std::vector<Mask>> conds;
      for (const auto& s : order) conds[{s.left.dec, s.right.dec}].push_back(s.cond.dec);
      for (const auto& [xy, zs] : conds) {
        const auto x = codes(fam, xy.first);
        const auto y = codes(fam, xy.second);
        for (std::size_t i = 0; i < zs.size(); ++i) {
          const auto z = codes(fam, zs[i]);
          if (!is_function_of(z, y)) continue;
          for (std::size_t j = i + 1; j < zs.size(); ++j) {
            const auto w = codes(fam, zs[j]);
            if (!is_function_of(w, y)) continue;
            ++report.instances;
            if (!vci_codes(x, y, partition_meet(z, w))) {
              const CIStatement a{decision_set(xy.first), decision_set(xy.second), decision_set(zs[i])};
              const CIStatement b{decision_set(xy.first), decision_set(xy.second), decision_set(zs[j])};
              const CIStatement ps[] = {a, b};
              record("P6", ps,
                     render(u, a.left) + " _||_ " + render(u, a.right) + " | meet(" +
                         render(u, a.cond) + "; " + render(u, b.cond) + ")");
            }
          }
        }
      }
    }
  }
  return report;
}

}  // namespace eci
