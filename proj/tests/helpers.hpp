#pragma once

// Small model builders and brute-force oracles shared by the unit tests.
// The oracles evaluate definitions directly with rational conditionals and
// share no code with the checkers under test.

#include "eci/checks.hpp"
#include "eci/distribution.hpp"
#include "eci/family.hpp"

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testing {

using namespace eci;

inline std::vector<Variable> binary_vars(const std::vector<std::string>& names) {
  std::vector<Variable> out;
  for (const auto& n : names) out.push_back({n, {"0", "1"}});
  return out;
}

/// Masses drawn from [0, grid] and normalized; never all zero.
inline DiscreteDistribution random_dist(std::mt19937_64& rng, const std::vector<Variable>& vars,
                                        int grid = 3) {
  const std::size_t n = atom_count(vars);
  std::vector<long> m(n);
  long total = 0;
  for (auto& x : m) total += x = static_cast<long>(rng() % static_cast<unsigned>(grid + 1));
  if (total == 0) m[rng() % n] = total = 1;
  std::vector<Rational> pmf;
  for (long x : m) pmf.emplace_back(x, total);
  return DiscreteDistribution(vars, pmf);
}

inline DiscreteDistribution from_masses(const std::vector<Variable>& vars, const std::vector<long>& m) {
  long total = 0;
  for (long x : m) total += x;
  std::vector<Rational> pmf;
  for (long x : m) pmf.emplace_back(x, total);
  return DiscreteDistribution(vars, pmf);
}

inline DecisionVar identity(const std::vector<std::string>& regimes, std::string name = "Sigma") {
  DecisionVar d{std::move(name), regimes, {}};
  for (std::size_t i = 0; i < regimes.size(); ++i) d.value.push_back(static_cast<int>(i));
  return d;
}

inline std::vector<std::string> regime_labels(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("s" + std::to_string(i));
  return out;
}

inline PartialAssignment event_of(Mask m, const std::vector<int>& vals) {
  PartialAssignment e;
  std::size_t k = 0;
  for (int v = 0; v < 64; ++v)
    if (m >> v & 1) e.push_back({v, vals[k++]});
  return e;
}

/// All assignments of the variables in `m` (value vectors in variable order).
inline std::vector<std::vector<int>> grid(const std::vector<Variable>& vars, Mask m) {
  std::vector<std::vector<int>> out{{}};
  for (int v = 0; v < static_cast<int>(vars.size()); ++v) {
    if (!(m >> v & 1)) continue;
    std::vector<std::vector<int>> next;
    for (const auto& p : out)
      for (int x = 0; x < vars[v].cardinality(); ++x) {
        auto q = p;
        q.push_back(x);
        next.push_back(q);
      }
    out = next;
  }
  return out;
}

inline PartialAssignment merge(PartialAssignment a, const PartialAssignment& b, bool* consistent) {
  *consistent = true;
  for (auto [v, x] : b) {
    bool found = false;
    for (auto [w, y] : a)
      if (w == v) {
        found = true;
        if (y != x) *consistent = false;
      }
    if (!found) a.push_back({v, x});
  }
  return a;
}

/// P(X=x | Y=y, Z=z) for an event over X given the event (y, z); returns 0
/// for x inconsistent with the context.
inline Rational cond_prob(const DiscreteDistribution& d, const PartialAssignment& x,
                          const PartialAssignment& ctx) {
  bool ok = true;
  const auto joint = merge(ctx, x, &ok);
  if (!ok) return 0;
  return d.probability(joint) / d.probability(ctx);
}

/// SCI in conditional-table-constancy form: P(x | y, z) = P(x | z) whenever
/// P(y, z) > 0.
inline bool oracle_sci(const DiscreteDistribution& d, Mask X, Mask Y, Mask Z) {
  const auto& vars = d.variables();
  for (const auto& z : grid(vars, Z)) {
    const auto ez = event_of(Z, z);
    if (d.probability(ez) == 0) continue;
    for (const auto& y : grid(vars, Y)) {
      bool ok = true;
      const auto eyz = merge(ez, event_of(Y, y), &ok);
      if (!ok || d.probability(eyz) == 0) continue;
      for (const auto& x : grid(vars, X)) {
        const auto ex = event_of(X, x);
        if (cond_prob(d, ex, eyz) != cond_prob(d, ex, ez)) return false;
      }
    }
  }
  return true;
}

/// ECI by definition: within each Φ-group, P_σ(x | y, z) takes one value
/// per (x, z) over all regimes and positive contexts.
inline bool oracle_eci(const RegimeFamily& fam, const CIStatement& s,
                       const std::vector<int>& regimes_in = {}) {
  std::vector<int> regimes = regimes_in;
  if (regimes.empty())
    for (int r = 0; r < fam.regime_count(); ++r) regimes.push_back(r);
  const auto& vars = fam.variables();
  std::map<std::vector<int>, std::vector<int>> groups;
  for (int r : regimes) {
    std::vector<int> phi;
    for (std::size_t k = 0; k < fam.decisions().size(); ++k)
      if (s.cond.dec >> k & 1) phi.push_back(fam.decisions()[k].value[r]);
    groups[phi].push_back(r);
  }
  for (const auto& [phi, grp] : groups) {
    std::map<std::pair<std::vector<int>, std::vector<int>>, Rational> w;
    for (int r : grp) {
      const auto& d = fam.dist(r);
      for (const auto& z : grid(vars, s.cond.stoch))
        for (const auto& y : grid(vars, s.right.stoch)) {
          bool ok = true;
          const auto ctx = merge(event_of(s.cond.stoch, z), event_of(s.right.stoch, y), &ok);
          if (!ok || d.probability(ctx) == 0) continue;
          for (const auto& x : grid(vars, s.left.stoch)) {
            const Rational p = cond_prob(d, event_of(s.left.stoch, x), ctx);
            auto [it, fresh] = w.emplace(std::make_pair(x, z), p);
            if (!fresh && it->second != p) return false;
          }
        }
    }
  }
  return true;
}

/// VCI by definition with conditional images.
inline bool oracle_vci(const RegimeFamily& fam, Mask X, Mask Y, Mask Z,
                       const std::vector<int>& regimes = {}) {
  std::vector<int> space = regimes;
  if (space.empty())
    for (int r = 0; r < fam.regime_count(); ++r) space.push_back(r);
  auto values = [&](Mask m, int r) {
    std::vector<int> out;
    for (std::size_t k = 0; k < fam.decisions().size(); ++k)
      if (m >> k & 1) out.push_back(fam.decisions()[k].value[r]);
    return out;
  };
  for (int r : space) {
    std::set<std::vector<int>> rz, ryz;
    for (int q : space) {
      if (values(Z, q) != values(Z, r)) continue;
      rz.insert(values(X, q));
      if (values(Y, q) == values(Y, r)) ryz.insert(values(X, q));
    }
    if (rz != ryz) return false;
  }
  return true;
}

/// Interventional joint built atom by atom in time order: observational
/// kernels for observed variables, `policy(stage, values)` for actions.
/// Every variable of `obs` must appear in `order` as (index, is_action).
using Policy = std::function<std::vector<Rational>(std::size_t stage, const std::vector<int>& values)>;

inline DiscreteDistribution materialize(const DiscreteDistribution& obs,
                                        const std::vector<std::pair<int, bool>>& order,
                                        const Policy& policy) {
  std::vector<Rational> pmf(obs.atom_count());
  for (std::size_t a = 0; a < obs.atom_count(); ++a) {
    const auto vals = obs.decode(a);
    Rational p = 1;
    PartialAssignment past;
    std::size_t stage = 0;
    for (auto [v, is_action] : order) {
      const int x = vals[static_cast<std::size_t>(v)];
      if (p == 0) break;
      if (is_action) {
        p *= policy(stage++, vals)[static_cast<std::size_t>(x)];
      } else {
        if (obs.probability(past) == 0) throw std::runtime_error("observational context has no mass");
        p *= cond_prob(obs, {{v, x}}, past);
      }
      past.push_back({v, x});
    }
    pmf[a] = p;
  }
  return DiscreteDistribution(obs.variables(), pmf);
}

/// Σ_atoms P(atom) k(value of variable y).
inline Rational expect(const DiscreteDistribution& d, int y, const std::vector<Rational>& k) {
  Rational e = 0;
  for (std::size_t a = 0; a < d.atom_count(); ++a)
    e += d.pmf()[a] * k[static_cast<std::size_t>(d.decode(a)[static_cast<std::size_t>(y)])];
  return e;
}

}  // namespace testing
