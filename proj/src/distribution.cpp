#include "eci/distribution.hpp"

#include "eci/error.hpp"

#include <algorithm>
#include <limits>

namespace eci {

int Variable::value_index(std::string_view label) const {
  auto it = std::find(values.begin(), values.end(), label);
  return it == values.end() ? -1 : static_cast<int>(it - values.begin());
}

std::size_t atom_count(const std::vector<Variable>& vars) {
  std::size_t n = 1;
  for (const auto& v : vars) {
    if (v.values.empty())
      throw Error(ErrorCode::invalid_model, "variable '" + v.name + "' has no values");
    if (n > (std::size_t{1} << 40) / v.values.size())
      throw Error(ErrorCode::invalid_model, "model has too many atoms");
    n *= v.values.size();
  }
  return n;
}

DiscreteDistribution::DiscreteDistribution(std::vector<Variable> vars, std::vector<Rational> pmf)
    : vars_(std::move(vars)), pmf_(std::move(pmf)) {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    for (std::size_t j = i + 1; j < vars_.size(); ++j)
      if (vars_[i].name == vars_[j].name)
        throw Error(ErrorCode::invalid_model, "variable '" + vars_[i].name + "' listed twice");
  const std::size_t n = eci::atom_count(vars_);
  if (pmf_.size() != n)
    throw Error(ErrorCode::invalid_model, "pmf has " + std::to_string(pmf_.size()) +
                                              " entries, expected " + std::to_string(n));
  Rational sum = 0;
  for (const auto& p : pmf_) {
    if (p < 0) throw Error(ErrorCode::invalid_model, "negative probability " + to_string(p));
    sum += p;
  }
  if (sum != 1) throw Error(ErrorCode::invalid_model, "probabilities sum to " + to_string(sum));

  values_.resize(n * vars_.size());
  for (std::size_t a = 0; a < n; ++a) {
    const Assignment as = decode(a);
    std::copy(as.begin(), as.end(), values_.begin() + static_cast<std::ptrdiff_t>(a * vars_.size()));
  }

  BigInt l = 1;
  for (const auto& p : pmf_) {
    const BigInt d = boost::multiprecision::denominator(p);
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  big_total_ = l;
  big_mass_.reserve(n);
  for (const auto& p : pmf_)
    big_mass_.push_back(boost::multiprecision::numerator(p) * (l / boost::multiprecision::denominator(p)));
  if (l < (BigInt(1) << 62)) {
    small_total_ = l.convert_to<std::int64_t>();
    small_mass_.reserve(n);
    for (const auto& m : big_mass_) small_mass_.push_back(m.convert_to<std::int64_t>());
  }
}

int DiscreteDistribution::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return static_cast<int>(i);
  return -1;
}

Assignment DiscreteDistribution::decode(std::size_t atom) const {
  Assignment a(vars_.size());
  for (std::size_t i = vars_.size(); i-- > 0;) {
    const auto c = static_cast<std::size_t>(vars_[i].cardinality());
    a[i] = static_cast<int>(atom % c);
    atom /= c;
  }
  return a;
}

std::size_t DiscreteDistribution::encode(const Assignment& a) const {
  std::size_t atom = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    atom = atom * static_cast<std::size_t>(vars_[i].cardinality()) + static_cast<std::size_t>(a[i]);
  return atom;
}

Rational DiscreteDistribution::probability(const PartialAssignment& event) const {
  Rational total = 0;
  for (std::size_t a = 0; a < pmf_.size(); ++a) {
    bool match = true;
    for (auto [v, x] : event)
      if (value(a, v) != x) {
        match = false;
        break;
      }
    if (match) total += pmf_[a];
  }
  return total;
}

std::map<std::vector<int>, Rational> DiscreteDistribution::marginal(Mask vars) const {
  std::map<std::vector<int>, Rational> out;
  for (std::size_t a = 0; a < pmf_.size(); ++a) {
    std::vector<int> key;
    for (int v = 0; v < variable_count(); ++v)
      if (vars >> v & 1) key.push_back(value(a, v));
    out[key] += pmf_[a];
  }
  return out;
}

std::map<std::vector<int>, Rational> DiscreteDistribution::conditional(
    Mask targets, const PartialAssignment& given) const {
  const Rational pg = probability(given);
  if (pg == 0) throw Error(ErrorCode::zero_conditioning_event, "conditioning event has probability 0");
  std::map<std::vector<int>, Rational> out;
  for (std::size_t a = 0; a < pmf_.size(); ++a) {
    if (pmf_[a] == 0) continue;
    bool match = true;
    for (auto [v, x] : given)
      if (value(a, v) != x) {
        match = false;
        break;
      }
    if (!match) continue;
    std::vector<int> key;
    for (int v = 0; v < variable_count(); ++v)
      if (targets >> v & 1) key.push_back(value(a, v));
    out[key] += pmf_[a] / pg;
  }
  return out;
}

Universe universe_of(const DiscreteDistribution& d) {
  Universe u;
  for (const auto& v : d.variables()) u.declare(v.name, VarKind::stochastic);
  return u;
}

}  // namespace eci
