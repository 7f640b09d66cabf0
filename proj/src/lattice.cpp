#include "eci/lattice.hpp"

#include "eci/error.hpp"

#include <algorithm>

namespace eci {

std::string_view kind_name(VarKind kind) {
  return kind == VarKind::stochastic ? "stochastic" : "decision";
}

Universe::Universe(const std::vector<std::string>& stochastic,
                   const std::vector<std::string>& decision) {
  for (const auto& n : stochastic) declare(n, VarKind::stochastic);
  for (const auto& n : decision) declare(n, VarKind::decision);
}

void Universe::declare(const std::string& name, VarKind kind) {
  if (index_.count(name))
    throw Error(ErrorCode::duplicate_variable, "variable '" + name + "' declared twice");
  auto& list = kind == VarKind::stochastic ? stochastic_ : decision_;
  if (static_cast<int>(list.size()) >= kMaxVariablesPerKind)
    throw Error(ErrorCode::invalid_argument, "too many " + std::string(kind_name(kind)) + " variables");
  index_.emplace(name, VariableRef{kind, static_cast<int>(list.size())});
  list.push_back(name);
}

std::optional<VariableRef> Universe::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Mask Universe::all(VarKind kind) const {
  const int n = size(kind);
  return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1;
}

std::vector<VariableDecl> Universe::declarations() const {
  std::vector<VariableDecl> out;
  for (const auto& n : stochastic_) out.push_back({n, VarKind::stochastic});
  for (const auto& n : decision_) out.push_back({n, VarKind::decision});
  return out;
}

std::size_t VarSetHash::operator()(const VarSet& v) const noexcept {
  std::uint64_t h = v.stoch * 0x9E3779B97F4A7C15ULL;
  h ^= (v.dec + 0x632BE59BD9B4E019ULL) + (h << 6) + (h >> 2);
  return static_cast<std::size_t>(h);
}

std::size_t CIStatementHash::operator()(const CIStatement& s) const noexcept {
  VarSetHash hv;
  std::size_t h = hv(s.left);
  h ^= hv(s.right) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  h ^= hv(s.cond) + 0xBF58476D1CE4E5B9ULL + (h << 6) + (h >> 2);
  return h;
}

VarSet resolve(const Universe& u, const std::vector<std::string>& names) {
  VarSet v;
  for (const auto& n : names) {
    auto ref = u.find(n);
    if (!ref) throw Error(ErrorCode::unknown_variable, "unknown variable '" + n + "'");
    const Mask bit = Mask{1} << ref->index;
    if (ref->kind == VarKind::stochastic)
      v.stoch |= bit;
    else
      v.dec |= bit;
  }
  return v;
}

std::vector<std::string> names_of(const Universe& u, VarSet v) {
  std::vector<std::string> out;
  for (int i = 0; i < u.size(VarKind::stochastic); ++i)
    if (v.stoch >> i & 1) out.push_back(u.name(VarKind::stochastic, i));
  for (int i = 0; i < u.size(VarKind::decision); ++i)
    if (v.dec >> i & 1) out.push_back(u.name(VarKind::decision, i));
  return out;
}

CIStatement canonicalize(const Universe& u, const RawStatement& raw) {
  return {resolve(u, raw.left), resolve(u, raw.right), resolve(u, raw.cond)};
}

RawStatement to_raw(const Universe& u, const CIStatement& s) {
  return {names_of(u, s.left), names_of(u, s.right), names_of(u, s.cond)};
}

CIStatement rebind(const CIStatement& s, const Universe& from, const Universe& to) {
  if (&from == &to || from == to) return s;
  return canonicalize(to, to_raw(from, s));
}

std::string render(const Universe& u, VarSet v) {
  std::string out;
  for (const auto& n : names_of(u, v)) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

std::string render(const Universe& u, const CIStatement& s) {
  std::string out = render(u, s.left) + " _||_ " + render(u, s.right);
  if (!s.cond.empty()) out += " | " + render(u, s.cond);
  return out;
}

void ReductionRegistry::add(const Universe& u, std::string_view reduced, std::string_view of) {
  auto w = u.find(reduced);
  auto y = u.find(of);
  if (!w) throw Error(ErrorCode::unknown_variable, "unknown variable '" + std::string(reduced) + "'");
  if (!y) throw Error(ErrorCode::unknown_variable, "unknown variable '" + std::string(of) + "'");
  if (w->kind != y->kind)
    throw Error(ErrorCode::kind_mismatch,
                "reduction '" + std::string(reduced) + " <= " + std::string(of) +
                    "' mixes stochastic and decision variables");
  pairs_.push_back({w->kind, w->index, y->index});
  recompute(w->kind);
}

void ReductionRegistry::recompute(VarKind kind) {
  auto& below = below_[static_cast<int>(kind)];
  int n = 0;
  for (const auto& p : pairs_)
    if (p.kind == kind) n = std::max({n, p.reduced + 1, p.of + 1});
  below.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) below[i] = Mask{1} << i;
  for (const auto& p : pairs_)
    if (p.kind == kind) below[p.of] |= Mask{1} << p.reduced;
  // Warshall on bitsets.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (below[i] >> k & 1) below[i] |= below[k];
}

bool ReductionRegistry::reduces(VarKind kind, int reduced, int of) const {
  if (reduced == of) return true;
  const auto& below = below_[static_cast<int>(kind)];
  if (of >= static_cast<int>(below.size())) return false;
  return below[of] >> reduced & 1;
}

Mask ReductionRegistry::down(VarKind kind, Mask of) const {
  const auto& below = below_[static_cast<int>(kind)];
  Mask out = of;
  for (int i = 0; i < static_cast<int>(below.size()); ++i)
    if (of >> i & 1) out |= below[i];
  return out;
}

bool is_reduction(VarSet w, VarSet y, const ReductionRegistry& reg) {
  return w.subset_of(reg.down(y));
}

bool equivalent(VarSet a, VarSet b, const ReductionRegistry& reg) {
  return is_reduction(a, b, reg) && is_reduction(b, a, reg);
}

void ComplementarityDecl::add(Mask family) {
  if (family == 0) throw Error(ErrorCode::invalid_argument, "empty complementary family");
  if (std::find(families_.begin(), families_.end(), family) == families_.end())
    families_.push_back(family);
}

bool ComplementarityDecl::covers(Mask decision) const {
  return std::any_of(families_.begin(), families_.end(),
                     [&](Mask f) { return (f & ~decision) == 0; });
}

bool well_formed(const CIStatement& s, const ComplementarityDecl& comp, bool allow_general) {
  if (s.left.empty() || s.right.empty()) return false;
  if (!allow_general && s.is_general()) return false;
  const Mask dec = s.left.dec | s.right.dec | s.cond.dec;
  return dec == 0 || comp.covers(dec);
}

}  // namespace eci
