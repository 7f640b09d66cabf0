#include "eci/causal.hpp"

#include "eci/error.hpp"
#include "eci/model_io.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace eci {

namespace {

[[noreturn]] void bad_argument(const std::string& m) { throw Error(ErrorCode::invalid_argument, m); }
[[noreturn]] void bad_model(const std::string& m) { throw Error(ErrorCode::invalid_model, m); }

int var_index(const RegimeFamily& fam, const std::string& name) {
  const int i = fam.dist(0).index_of(name);
  if (i < 0) throw Error(ErrorCode::unknown_variable, "unknown variable '" + name + "'");
  return i;
}

Mask mask_of(const RegimeFamily& fam, const std::vector<std::string>& names) {
  Mask m = 0;
  for (const auto& n : names) m |= Mask{1} << var_index(fam, n);
  return m;
}

// left ⊥ Σ | cond, with Σ the identity on regimes.
bool invariant_given(const RegimeFamily& fam, Mask left, Mask cond) {
  RegimeFamily f = fam;
  const std::string sigma = f.ensure_identity();
  const CIStatement s{stochastic_set(left), decision_set(Mask{1} << f.decision_index(sigma)),
                      stochastic_set(cond)};
  return check_eci(f, s).holds;
}

int regime_of(const RegimeFamily& fam, const std::string& label) {
  const int r = fam.regime_index(label);
  if (r < 0) throw Error(ErrorCode::invalid_model, "no regime '" + label + "'");
  return r;
}

const InfoBase& info_base_of(const RegimeFamily& fam, const std::optional<InfoBase>& ib) {
  if (ib) return *ib;
  if (!fam.info_base()) throw Error(ErrorCode::invalid_argument, "model has no info base");
  return *fam.info_base();
}

bool stable(const RegimeFamily& fam, const InfoBase& ib, bool with_unmeasured) {
  Mask past = 0;
  for (std::size_t i = 0; i < ib.observables.size(); ++i) {
    Mask group = mask_of(fam, ib.observables[i]);
    if (with_unmeasured && i < ib.unmeasured.size()) group |= mask_of(fam, ib.unmeasured[i]);
    if (group != 0 && !invariant_given(fam, group, past)) return false;
    past |= group;
    if (i < ib.actions.size()) past |= mask_of(fam, {ib.actions[i]});
  }
  return true;
}

Rational expectation(const DiscreteDistribution& d, int y, const std::vector<Rational>& value,
                     const PartialAssignment& given = {}) {
  Rational e = 0;
  for (const auto& [key, p] : d.conditional(Mask{1} << y, given)) e += p * value[static_cast<std::size_t>(key[0])];
  return e;
}

}  // namespace

bool check_ancillarity(const RegimeFamily& fam, Mask T) { return invariant_given(fam, T, 0); }

bool check_sufficiency(const RegimeFamily& fam, Mask X, Mask T, const ReductionRegistry& reg) {
  if (!is_reduction(stochastic_set(T), stochastic_set(X), reg))
    throw Error(ErrorCode::reduction_missing, "the statistic is not a registered function of the data");
  return invariant_given(fam, X, T);
}

Json AceResult::to_json() const {
  Json j;
  j["ace_interventional"] = to_string(ace_interventional);
  j["ace_observational"] = ace_observational ? Json(to_string(*ace_observational)) : Json(nullptr);
  j["positivity"] = positivity;
  j["transfer_valid"] = transfer_valid;
  return j;
}

AceResult ace(const RegimeFamily& fam, const std::string& Y, const std::string& T,
              const AceLabels& labels) {
  const int ro = regime_of(fam, labels.obs), r0 = regime_of(fam, labels.do0),
            r1 = regime_of(fam, labels.do1);
  const int y = var_index(fam, Y), t = var_index(fam, T);
  const auto& vars = fam.variables();
  if (vars[static_cast<std::size_t>(t)].cardinality() != 2)
    throw Error(ErrorCode::invalid_model, "treatment '" + T + "' is not binary");
  std::vector<Rational> value;
  for (const auto& label : vars[static_cast<std::size_t>(y)].values) {
    try {
      value.push_back(parse_rational(label));
    } catch (const Error&) {
      throw Error(ErrorCode::invalid_model, "response value '" + label + "' is not a number");
    }
  }

  for (int arm = 0; arm < 2; ++arm) {
    const int r = arm == 0 ? r0 : r1;
    if (fam.dist(r).probability({{t, arm}}) != 1)
      throw Error(ErrorCode::not_intervention,
                  "regime '" + fam.regimes()[static_cast<std::size_t>(r)] + "' does not fix " + T +
                      " = " + vars[static_cast<std::size_t>(t)].values[static_cast<std::size_t>(arm)]);
  }

  AceResult res;
  res.ace_interventional = expectation(fam.dist(r1), y, value) - expectation(fam.dist(r0), y, value);
  const auto& obs = fam.dist(ro);
  res.positivity = obs.probability({{t, 0}}) > 0 && obs.probability({{t, 1}}) > 0;
  if (res.positivity) {
    res.ace_observational =
        expectation(obs, y, value, {{t, 1}}) - expectation(obs, y, value, {{t, 0}});
    res.transfer_valid = invariant_given(fam, Mask{1} << y, Mask{1} << t);
  }
  return res;
}

bool check_simple_stability(const RegimeFamily& fam, const std::optional<InfoBase>& ib) {
  return stable(fam, info_base_of(fam, ib), false);
}

bool check_extended_stability(const RegimeFamily& fam, const std::optional<InfoBase>& ib) {
  return stable(fam, info_base_of(fam, ib), true);
}

Strategy strategy_from_json(const Json& j) {
  Strategy s;
  try {
    s.regime = j.value("regime", std::string("s"));
    for (const auto& st : j.at("stages")) {
      Strategy::Stage stage;
      stage.action = st.at("action").get<std::string>();
      for (const auto& kj : st.at("kernels")) {
        Strategy::Kernel k;
        if (kj.contains("history"))
          for (const auto& [n, v] : kj.at("history").items())
            k.history[n] = v.is_string() ? v.get<std::string>() : v.dump();
        Rational sum = 0;
        for (const auto& [a, p] : kj.at("dist").items()) {
          const Rational q = rational_from_json(p);
          if (q < 0) bad_model("negative probability in a kernel for " + stage.action);
          k.dist[a] = q;
          sum += q;
        }
        if (sum != 1) bad_model("kernel for " + stage.action + " sums to " + to_string(sum));
        stage.kernels.push_back(std::move(k));
      }
      s.stages.push_back(std::move(stage));
    }
  } catch (const Json::exception& e) {
    bad_model(std::string("malformed strategy: ") + e.what());
  }
  return s;
}

Json strategy_to_json(const Strategy& s) {
  Json j;
  j["regime"] = s.regime;
  j["stages"] = Json::array();
  for (const auto& st : s.stages) {
    Json sj;
    sj["action"] = st.action;
    sj["kernels"] = Json::array();
    for (const auto& k : st.kernels) {
      Json kj;
      kj["history"] = Json::object();
      for (const auto& [n, v] : k.history) kj["history"][n] = v;
      kj["dist"] = Json::object();
      for (const auto& [a, p] : k.dist) kj["dist"][a] = to_string(p);
      sj["kernels"].push_back(kj);
    }
    j["stages"].push_back(sj);
  }
  return j;
}

Rational g_formula(const RegimeFamily& fam, const Strategy& strat,
                   const std::map<std::string, Rational>& k, const std::string& obs,
                   const std::optional<InfoBase>& ibo) {
  const InfoBase& ib = info_base_of(fam, ibo);
  const auto& d = fam.dist(regime_of(fam, obs));
  const auto& vars = fam.variables();
  const std::size_t n = ib.actions.size();
  if (strat.stages.size() != n) bad_argument("strategy has the wrong number of stages");
  for (std::size_t i = 0; i < n; ++i)
    if (strat.stages[i].action != ib.actions[i])
      bad_argument("stage " + std::to_string(i + 1) + " acts on " + strat.stages[i].action + ", expected " +
          ib.actions[i]);
  if (!check_simple_stability(fam, ib))
    throw Error(ErrorCode::stability_violated, "simple stability does not hold");

  const int y = var_index(fam, ib.observables.back().back());
  std::vector<Rational> kv;
  for (const auto& label : vars[static_cast<std::size_t>(y)].values) {
    auto it = k.find(label);
    if (it == k.end()) bad_argument("k has no value for " + vars[static_cast<std::size_t>(y)].name + " = " + label);
    kv.push_back(it->second);
  }

  // Resolved kernels: history as (variable, value) pairs, dist per action value.
  struct Resolved {
    PartialAssignment history;
    std::vector<Rational> dist;
  };
  std::vector<std::vector<Resolved>> kernels(n);
  std::set<int> seen;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& name : ib.observables[i]) seen.insert(var_index(fam, name));
    const int a = var_index(fam, ib.actions[i]);
    const auto& av = vars[static_cast<std::size_t>(a)];
    for (const auto& kern : strat.stages[i].kernels) {
      Resolved r;
      for (const auto& [name, label] : kern.history) {
        const int v = var_index(fam, name);
        if (!seen.count(v)) bad_argument("kernel for " + av.name + " conditions on " + name + ", which is not yet observed");
        const int x = vars[static_cast<std::size_t>(v)].value_index(label);
        if (x < 0) bad_argument("unknown value " + name + " = " + label);
        r.history.emplace_back(v, x);
      }
      r.dist.assign(static_cast<std::size_t>(av.cardinality()), Rational(0));
      for (const auto& [label, p] : kern.dist) {
        const int x = av.value_index(label);
        if (x < 0) bad_argument("unknown action value " + av.name + " = " + label);
        r.dist[static_cast<std::size_t>(x)] = p;
      }
      kernels[i].push_back(std::move(r));
    }
    seen.insert(a);
  }

  auto describe = [&](const PartialAssignment& e) {
    std::string s;
    for (auto [v, x] : e) {
      if (!s.empty()) s += ", ";
      s += vars[static_cast<std::size_t>(v)].name + "=" +
           vars[static_cast<std::size_t>(v)].values[static_cast<std::size_t>(x)];
    }
    return s.empty() ? std::string("(empty)") : s;
  };

  Rational total = 0;
  PartialAssignment event;
  std::function<void(std::size_t, const Rational&)> walk = [&](std::size_t i, const Rational& w) {
    const Rational pctx = d.probability(event);
    if (pctx == 0)
      throw Error(ErrorCode::positivity_violated,
                  "context " + describe(event) + " is reachable but has observational probability 0");
    const std::vector<int> group = [&] {
      std::vector<int> g;
      for (const auto& name : ib.observables[i]) g.push_back(var_index(fam, name));
      return g;
    }();
    std::vector<int> vals(group.size(), 0);
    while (true) {
      const std::size_t mark = event.size();
      for (std::size_t g = 0; g < group.size(); ++g) event.emplace_back(group[g], vals[g]);
      const Rational p = d.probability(event) / pctx;
      if (p > 0) {
        if (i == n) {
          int yv = -1;
          for (auto [v, x] : event)
            if (v == y) yv = x;
          total += w * p * kv[static_cast<std::size_t>(yv)];
        } else {
          const Resolved* kern = nullptr;
          for (const auto& r : kernels[i]) {
            const bool match = std::all_of(r.history.begin(), r.history.end(), [&](auto h) {
              return std::find(event.begin(), event.end(), h) != event.end();
            });
            if (match) {
              kern = &r;
              break;
            }
          }
          if (!kern) bad_argument("no kernel for " + ib.actions[i] + " after " + describe(event));
          const int a = var_index(fam, ib.actions[i]);
          for (std::size_t x = 0; x < kern->dist.size(); ++x) {
            if (kern->dist[x] == 0) continue;
            event.emplace_back(a, static_cast<int>(x));
            walk(i + 1, w * p * kern->dist[x]);
            event.pop_back();
          }
        }
      }
      event.resize(mark);
      std::size_t g = group.size();
      while (g > 0) {
        const int card = vars[static_cast<std::size_t>(group[g - 1])].cardinality();
        if (++vals[g - 1] < card) break;
        vals[g - 1] = 0;
        --g;
      }
      if (g == 0) break;
    }
  };
  walk(0, Rational(1));
  return total;
}

}  // namespace eci
