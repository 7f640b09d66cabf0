#include "eci/family.hpp"

#include "eci/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace eci {

RegimeFamily::RegimeFamily(std::vector<std::string> regimes, std::vector<DiscreteDistribution> dists,
                           std::vector<DecisionVar> decisions)
    : regimes_(std::move(regimes)), dists_(std::move(dists)) {
  if (regimes_.empty()) throw Error(ErrorCode::invalid_model, "family has no regimes");
  if (dists_.size() != regimes_.size())
    throw Error(ErrorCode::invalid_model, "one distribution per regime required");
  for (std::size_t i = 0; i < regimes_.size(); ++i)
    for (std::size_t j = i + 1; j < regimes_.size(); ++j)
      if (regimes_[i] == regimes_[j])
        throw Error(ErrorCode::invalid_model, "regime '" + regimes_[i] + "' listed twice");
  for (const auto& d : dists_)
    if (d.variables() != dists_.front().variables())
      throw Error(ErrorCode::invalid_model, "regimes do not share a variable signature");
  for (auto& d : decisions) add_decision(std::move(d));
}

int RegimeFamily::regime_index(std::string_view label) const {
  auto it = std::find(regimes_.begin(), regimes_.end(), label);
  return it == regimes_.end() ? -1 : static_cast<int>(it - regimes_.begin());
}

int RegimeFamily::decision_index(std::string_view name) const {
  for (std::size_t i = 0; i < decisions_.size(); ++i)
    if (decisions_[i].name == name) return static_cast<int>(i);
  return -1;
}

void RegimeFamily::validate_decision(const DecisionVar& d) const {
  if (decision_index(d.name) >= 0 || dists_.front().index_of(d.name) >= 0)
    throw Error(ErrorCode::invalid_model, "name '" + d.name + "' is used twice");
  if (d.value.size() != regimes_.size())
    throw Error(ErrorCode::invalid_model, "decision variable '" + d.name + "' needs a value per regime");
  for (int v : d.value)
    if (v < 0 || v >= d.cardinality())
      throw Error(ErrorCode::invalid_model, "decision variable '" + d.name + "' has a bad value");
}

void RegimeFamily::add_decision(DecisionVar d) {
  validate_decision(d);
  decisions_.push_back(std::move(d));
}

std::string RegimeFamily::ensure_identity() {
  for (const auto& d : decisions_) {
    std::set<int> seen(d.value.begin(), d.value.end());
    if (static_cast<int>(seen.size()) == regime_count()) return d.name;
  }
  std::string name = "Sigma";
  while (decision_index(name) >= 0 || dists_.front().index_of(name) >= 0) name += "_";
  DecisionVar id{name, regimes_, {}};
  id.value.resize(regimes_.size());
  std::iota(id.value.begin(), id.value.end(), 0);
  add_decision(std::move(id));
  return name;
}

void RegimeFamily::set_info_base(InfoBase ib) {
  const auto& d = dists_.front();
  auto known = [&](const std::string& n) {
    if (d.index_of(n) < 0) throw Error(ErrorCode::invalid_model, "info base names unknown variable '" + n + "'");
  };
  if (ib.observables.size() != ib.actions.size() + 1)
    throw Error(ErrorCode::invalid_model, "info base needs one more observable group than actions");
  if (!ib.unmeasured.empty() && ib.unmeasured.size() > ib.observables.size())
    throw Error(ErrorCode::invalid_model, "too many unmeasured groups");
  for (const auto& g : ib.observables)
    for (const auto& n : g) known(n);
  for (const auto& n : ib.actions) known(n);
  for (const auto& g : ib.unmeasured)
    for (const auto& n : g) known(n);
  if (ib.observables.back().empty())
    throw Error(ErrorCode::invalid_model, "the last observable group must hold the response");
  info_base_ = std::move(ib);
}

std::uint64_t RegimeFamily::decision_code(Mask dec, int regime) const {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < decisions_.size(); ++i)
    if (dec >> i & 1)
      code = code * static_cast<std::uint64_t>(decisions_[i].cardinality()) +
             static_cast<std::uint64_t>(decisions_[i].value[static_cast<std::size_t>(regime)]);
  return code;
}

Universe universe_of(const RegimeFamily& fam) {
  Universe u;
  for (const auto& v : fam.variables()) u.declare(v.name, VarKind::stochastic);
  for (const auto& d : fam.decisions()) u.declare(d.name, VarKind::decision);
  return u;
}

bool check_complementary(const RegimeFamily& fam, Mask dec) {
  std::set<std::uint64_t> codes;
  for (int r = 0; r < fam.regime_count(); ++r)
    if (!codes.insert(fam.decision_code(dec, r)).second) return false;
  return true;
}

std::vector<std::vector<int>> conditional_image(const RegimeFamily& fam, Mask x,
                                                const PartialAssignment& given,
                                                const std::vector<int>& regimes) {
  std::vector<int> space = regimes;
  if (space.empty()) {
    space.resize(static_cast<std::size_t>(fam.regime_count()));
    std::iota(space.begin(), space.end(), 0);
  }
  std::set<std::vector<int>> image;
  bool any = false;
  for (int r : space) {
    bool match = true;
    for (auto [d, v] : given)
      if (fam.decisions()[static_cast<std::size_t>(d)].value[static_cast<std::size_t>(r)] != v) {
        match = false;
        break;
      }
    if (!match) continue;
    any = true;
    std::vector<int> tuple;
    for (std::size_t i = 0; i < fam.decisions().size(); ++i)
      if (x >> i & 1) tuple.push_back(fam.decisions()[i].value[static_cast<std::size_t>(r)]);
    image.insert(tuple);
  }
  if (!any) throw Error(ErrorCode::empty_context, "no regime matches the conditioning values");
  return {image.begin(), image.end()};
}

std::vector<int> compute_S_z(const RegimeFamily& fam, Mask Z, const std::vector<int>& z) {
  PartialAssignment event;
  std::size_t k = 0;
  for (int v = 0; v < static_cast<int>(fam.variables().size()); ++v)
    if (Z >> v & 1) {
      if (k >= z.size()) throw Error(ErrorCode::invalid_argument, "assignment is shorter than Z");
      event.push_back({v, z[k++]});
    }
  std::vector<int> out;
  for (int r = 0; r < fam.regime_count(); ++r)
    if (fam.dist(r).probability(event) > 0) out.push_back(r);
  return out;
}

std::optional<int> find_dominating(const RegimeFamily& fam, const std::vector<int>& subset) {
  if (subset.empty()) throw Error(ErrorCode::invalid_argument, "empty regime subset");
  std::optional<int> best;
  for (int cand : subset) {
    const auto& pc = fam.dist(cand).pmf();
    bool dominates = true;
    for (int other : subset) {
      const auto& po = fam.dist(other).pmf();
      for (std::size_t a = 0; a < po.size() && dominates; ++a)
        if (po[a] > 0 && pc[a] == 0) dominates = false;
      if (!dominates) break;
    }
    if (dominates && (!best || fam.regimes()[static_cast<std::size_t>(cand)] <
                                   fam.regimes()[static_cast<std::size_t>(*best)]))
      best = cand;
  }
  return best;
}

std::vector<int> partition_meet(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::invalid_argument, "partitions of different sets");
  const std::size_t n = a.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto unite = [&](std::size_t i, std::size_t j) {
    i = find(i);
    j = find(j);
    if (i != j) parent[std::max(i, j)] = std::min(i, j);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a[i] == a[j] || b[i] == b[j]) unite(i, j);
  std::vector<int> block(n);
  std::vector<int> id(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (id[r] < 0) id[r] = next++;
    block[i] = id[r];
  }
  return block;
}

std::string regime_coordinate_name(const RegimeFamily& fam) {
  std::string name = "regime";
  while (fam.dist(0).index_of(name) >= 0 || fam.decision_index(name) >= 0) name += "_";
  return name;
}

DiscreteDistribution product_space(const RegimeFamily& fam, const std::vector<Rational>& prior) {
  if (static_cast<int>(prior.size()) != fam.regime_count())
    throw Error(ErrorCode::invalid_prior, "prior needs one mass per regime");
  Rational sum = 0;
  for (const auto& p : prior) {
    if (p <= 0) throw Error(ErrorCode::invalid_prior, "prior masses must be strictly positive");
    sum += p;
  }
  if (sum != 1) throw Error(ErrorCode::invalid_prior, "prior sums to " + to_string(sum));

  std::vector<Variable> vars = fam.variables();
  vars.push_back({regime_coordinate_name(fam), fam.regimes()});
  for (const auto& d : fam.decisions()) vars.push_back({d.name, d.labels});

  const std::size_t base = fam.dist(0).atom_count();
  std::vector<Rational> pmf(atom_count(vars), Rational(0));
  std::size_t stride_regime = 1;
  for (std::size_t i = fam.variables().size() + 1; i < vars.size(); ++i)
    stride_regime *= vars[i].values.size();
  for (int r = 0; r < fam.regime_count(); ++r) {
    std::size_t dec_code = 0;
    for (const auto& d : fam.decisions())
      dec_code = dec_code * static_cast<std::size_t>(d.cardinality()) +
                 static_cast<std::size_t>(d.value[static_cast<std::size_t>(r)]);
    for (std::size_t a = 0; a < base; ++a) {
      const std::size_t atom = (a * static_cast<std::size_t>(fam.regime_count()) +
                                static_cast<std::size_t>(r)) * stride_regime + dec_code;
      pmf[atom] = fam.dist(r).p(a) * prior[static_cast<std::size_t>(r)];
    }
  }
  return DiscreteDistribution(std::move(vars), std::move(pmf));
}

}  // namespace eci
