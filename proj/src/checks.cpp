#include "eci/checks.hpp"

#include "eci/error.hpp"

#include <array>
#include <numeric>
#include <set>
#include <unordered_map>

namespace eci {

namespace {

// Mixed-radix layout of the variables selected by a mask.
struct Layout {
  std::array<std::size_t, 64> stride{};
  std::size_t size = 1;

  Layout(const std::vector<int>& cards, Mask m) {
    for (int v = static_cast<int>(cards.size()); v-- > 0;)
      if (m >> v & 1) {
        stride[v] = size;
        size *= static_cast<std::size_t>(cards[v]);
      }
  }
  std::size_t index(const int* vals, Mask m) const {
    std::size_t i = 0;
    for (; m; m &= m - 1) {
      const int v = __builtin_ctzll(m);
      i += static_cast<std::size_t>(vals[v]) * stride[v];
    }
    return i;
  }
};

std::vector<int> cards_of(const std::vector<Variable>& vars) {
  std::vector<int> c;
  for (const auto& v : vars) c.push_back(v.cardinality());
  return c;
}

// Calls f() once per assignment of the variables in m, written into vals.
template <class F>
void for_each_assignment(const std::vector<int>& cards, Mask m, int* vals, F&& f) {
  std::vector<int> vs;
  for (Mask r = m; r; r &= r - 1) vs.push_back(__builtin_ctzll(r));
  for (int v : vs) vals[v] = 0;
  while (true) {
    f();
    std::size_t k = vs.size();
    while (k > 0) {
      const int v = vs[k - 1];
      if (++vals[v] < cards[static_cast<std::size_t>(v)]) break;
      vals[v] = 0;
      --k;
    }
    if (k == 0) return;
  }
}

template <class Int>
struct Wide;
template <>
struct Wide<std::int64_t> {
  using type = __int128;
};
template <>
struct Wide<BigInt> {
  using type = BigInt;
};

template <class Int>
typename Wide<Int>::type mul(const Int& a, const Int& b) {
  using W = typename Wide<Int>::type;
  return static_cast<W>(a) * static_cast<W>(b);
}

template <class Int>
const std::vector<Int>& masses(const DiscreteDistribution& d);
template <>
const std::vector<std::int64_t>& masses(const DiscreteDistribution& d) {
  return d.small_masses();
}
template <>
const std::vector<BigInt>& masses(const DiscreteDistribution& d) {
  return d.big_masses();
}

template <class Int>
std::vector<Int> marginal(const DiscreteDistribution& d, Mask m, const Layout& lay) {
  const auto& ms = masses<Int>(d);
  std::vector<Int> out(lay.size, Int(0));
  for (std::size_t a = 0; a < d.atom_count(); ++a) {
    if (ms[a] == 0) continue;
    std::size_t i = 0;
    for (Mask r = m; r; r &= r - 1) {
      const int v = __builtin_ctzll(r);
      i += static_cast<std::size_t>(d.value(a, v)) * lay.stride[v];
    }
    out[i] += ms[a];
  }
  return out;
}

template <class Int>
bool sci_impl(const DiscreteDistribution& d, Mask X, Mask Y, Mask Z) {
  const auto cards = cards_of(d.variables());
  const Mask Xm = X & ~Z;
  const Mask Ym = Y & ~Z;
  const Mask V = Xm & Ym;
  const Mask Yonly = Ym & ~V;

  const Layout lz(cards, Z), lxz(cards, Xm | Z), lyz(cards, Ym | Z), lall(cards, Xm | Ym | Z);
  const auto mz = marginal<Int>(d, Z, lz);
  const auto mxz = marginal<Int>(d, Xm | Z, lxz);
  const auto myz = marginal<Int>(d, Ym | Z, lyz);
  const auto mall = marginal<Int>(d, Xm | Ym | Z, lall);

  std::array<int, 64> vals{};
  if (V) {
    // Shared left/right variables outside Z must be almost surely
    // determined by Z.
    const Layout lvz(cards, V | Z);
    const auto mvz = marginal<Int>(d, V | Z, lvz);
    bool ok = true;
    for_each_assignment(cards, Z, vals.data(), [&] {
      if (!ok || mz[lz.index(vals.data(), Z)] == 0) return;
      int positive = 0;
      for_each_assignment(cards, V, vals.data(), [&] {
        if (mvz[lvz.index(vals.data(), V | Z)] != 0) ++positive;
      });
      if (positive > 1) ok = false;
    });
    if (!ok) return false;
  }

  bool ok = true;
  for_each_assignment(cards, Z, vals.data(), [&] {
    if (!ok) return;
    const Int& pz = mz[lz.index(vals.data(), Z)];
    if (pz == 0) return;
    for_each_assignment(cards, Xm, vals.data(), [&] {
      if (!ok) return;
      const Int& pxz = mxz[lxz.index(vals.data(), Xm | Z)];
      if (pxz == 0) return;
      for_each_assignment(cards, Yonly, vals.data(), [&] {
        if (!ok) return;
        const Int& pyz = myz[lyz.index(vals.data(), Ym | Z)];
        const Int& pxyz = mall[lall.index(vals.data(), Xm | Ym | Z)];
        if (mul(pxyz, pz) != mul(pxz, pyz)) ok = false;
      });
    });
  });
  return ok;
}

// Witness cell: the first (num, den) seen for a key.
template <class Int>
struct Cell {
  Int num{0};
  Int den{0};
};

// Regimes of the family grouped by the value code of `phi`, in order of
// first occurrence.
std::vector<std::vector<int>> groups_by(const RegimeFamily& fam, Mask phi,
                                        const std::vector<int>& regimes,
                                        std::vector<std::uint64_t>* codes = nullptr) {
  std::vector<std::vector<int>> out;
  std::vector<std::uint64_t> seen;
  for (int r : regimes) {
    const std::uint64_t c = fam.decision_code(phi, r);
    auto it = std::find(seen.begin(), seen.end(), c);
    if (it == seen.end()) {
      seen.push_back(c);
      out.push_back({r});
    } else {
      out[static_cast<std::size_t>(it - seen.begin())].push_back(r);
    }
  }
  if (codes) *codes = seen;
  return out;
}

std::vector<int> all_regimes(const RegimeFamily& fam) {
  std::vector<int> r(static_cast<std::size_t>(fam.regime_count()));
  std::iota(r.begin(), r.end(), 0);
  return r;
}

std::vector<int> decode_values(const int* vals, Mask m) {
  std::vector<int> out;
  for (; m; m &= m - 1) out.push_back(vals[__builtin_ctzll(m)]);
  return out;
}

// Common witness over one group of regimes for X ⊥ Y | Z (stochastic masks).
template <class Int>
bool eci_group(const RegimeFamily& fam, const std::vector<int>& group, Mask X, Mask Y, Mask Z,
               std::uint64_t phi_code, WitnessTable* out) {
  const auto cards = cards_of(fam.variables());
  const Mask YZ = Y | Z;
  const Mask O = X & YZ;     // left variables fixed by the context
  const Mask Xo = X & ~YZ;   // free left variables
  const Mask U = X | YZ;
  const Layout lu(cards, U), lyz(cards, YZ), lx(cards, X), lz(cards, Z);
  std::vector<Cell<Int>> cells(lx.size * lz.size);
  std::vector<char> set(cells.size(), 0);

  std::array<int, 64> vals{};  // context values (Y ∪ Z) and free left values
  std::array<int, 64> xv{};    // left-slot values, including overlaps
  bool ok = true;
  for (int r : group) {
    const auto& d = fam.dist(r);
    const auto mu = marginal<Int>(d, U, lu);
    const auto myz = marginal<Int>(d, YZ, lyz);
    for_each_assignment(cards, YZ, vals.data(), [&] {
      if (!ok) return;
      const Int& den = myz[lyz.index(vals.data(), YZ)];
      if (den == 0) return;
      const std::size_t iz = lz.index(vals.data(), Z);
      for_each_assignment(cards, X, xv.data(), [&] {
        if (!ok) return;
        bool consistent = true;
        for (Mask m = O; m; m &= m - 1) {
          const int v = __builtin_ctzll(m);
          if (xv[v] != vals[v]) {
            consistent = false;
            break;
          }
        }
        Int num{0};
        if (consistent) {
          for (Mask m = Xo; m; m &= m - 1) {
            const int v = __builtin_ctzll(m);
            vals[v] = xv[v];
          }
          num = mu[lu.index(vals.data(), U)];
        }
        const std::size_t key = lx.index(xv.data(), X) * lz.size + iz;
        if (!set[key]) {
          set[key] = 1;
          cells[key] = {num, den};
        } else if (mul(num, cells[key].den) != mul(cells[key].num, den)) {
          ok = false;
        }
      });
    });
    if (!ok) return false;
  }
  if (out) {
    // Rebuild keys in value order.
    for_each_assignment(cards, Z, vals.data(), [&] {
      const std::size_t iz = lz.index(vals.data(), Z);
      for_each_assignment(cards, X, xv.data(), [&] {
        const std::size_t key = lx.index(xv.data(), X) * lz.size + iz;
        if (!set[key]) return;
        Rational w(BigInt(cells[key].num), BigInt(cells[key].den));
        out->entries[{phi_code, decode_values(xv.data(), X), decode_values(vals.data(), Z)}] = w;
      });
    });
  }
  return true;
}

bool small_family(const RegimeFamily& fam) {
  for (const auto& d : fam.dists())
    if (!d.has_small_masses()) return false;
  return true;
}

void validate_eci(const RegimeFamily& fam, const CIStatement& s) {
  if (s.left.empty() || s.right.empty())
    throw Error(ErrorCode::malformed_statement, "outer slots must be non-empty");
  if (s.left.dec != 0)
    throw Error(ErrorCode::malformed_statement,
                "decision variables in the left slot need the general form");
  if (!check_complementary(fam, s.right.dec | s.cond.dec))
    throw Error(ErrorCode::not_complementary, "decision variables do not separate the regimes");
}

bool eci_on(const RegimeFamily& fam, const std::vector<std::vector<int>>& groups,
            const std::vector<std::uint64_t>& codes, const CIStatement& s, WitnessTable* out) {
  const bool small = small_family(fam);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const bool ok = small ? eci_group<std::int64_t>(fam, groups[g], s.left.stoch, s.right.stoch,
                                                    s.cond.stoch, codes[g], out)
                          : eci_group<BigInt>(fam, groups[g], s.left.stoch, s.right.stoch,
                                              s.cond.stoch, codes[g], out);
    if (!ok) return false;
  }
  return true;
}

}  // namespace

bool check_sci(const DiscreteDistribution& d, Mask X, Mask Y, Mask Z) {
  return d.has_small_masses() ? sci_impl<std::int64_t>(d, X, Y, Z) : sci_impl<BigInt>(d, X, Y, Z);
}

bool check_sci(const DiscreteDistribution& d, const CIStatement& s) {
  if (!s.is_pure_stochastic())
    throw Error(ErrorCode::semantics_mismatch, "stochastic independence takes stochastic variables only");
  return check_sci(d, s.left.stoch, s.right.stoch, s.cond.stoch);
}

bool check_vci(const RegimeFamily& fam, Mask X, Mask Y, Mask Z, const std::vector<int>& regimes) {
  const std::vector<int> space = regimes.empty() ? all_regimes(fam) : regimes;
  struct Ctx {
    std::set<std::uint64_t> xs, ys;
    std::set<std::pair<std::uint64_t, std::uint64_t>> xys;
  };
  std::unordered_map<std::uint64_t, Ctx> by_z;
  for (int r : space) {
    auto& c = by_z[fam.decision_code(Z, r)];
    const auto x = fam.decision_code(X, r);
    const auto y = fam.decision_code(Y, r);
    c.xs.insert(x);
    c.ys.insert(y);
    c.xys.insert({x, y});
  }
  for (const auto& [z, c] : by_z)
    if (c.xys.size() != c.xs.size() * c.ys.size()) return false;
  return true;
}

bool check_vci(const RegimeFamily& fam, const CIStatement& s, const std::vector<int>& regimes) {
  if (!s.is_pure_decision())
    throw Error(ErrorCode::semantics_mismatch, "variation independence takes decision variables only");
  return check_vci(fam, s.left.dec, s.right.dec, s.cond.dec, regimes);
}

EciResult check_eci(const RegimeFamily& fam, const CIStatement& s, bool want_witness) {
  validate_eci(fam, s);
  std::vector<std::uint64_t> codes;
  const auto groups = groups_by(fam, s.cond.dec, all_regimes(fam), &codes);
  EciResult res;
  WitnessTable table{s.cond.dec, s.left.stoch, s.cond.stoch, {}};
  res.holds = eci_on(fam, groups, codes, s, want_witness ? &table : nullptr);
  if (res.holds && want_witness) res.witness = std::move(table);
  return res;
}

bool check_pairwise_eci(const RegimeFamily& fam, const CIStatement& s) {
  validate_eci(fam, s);
  std::vector<std::uint64_t> codes;
  const auto groups = groups_by(fam, s.cond.dec, all_regimes(fam), &codes);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& grp = groups[g];
    if (grp.size() == 1 && !eci_on(fam, {grp}, {codes[g]}, s, nullptr)) return false;
    for (std::size_t i = 0; i < grp.size(); ++i)
      for (std::size_t j = i + 1; j < grp.size(); ++j)
        if (!eci_on(fam, {{grp[i], grp[j]}}, {codes[g]}, s, nullptr)) return false;
  }
  return true;
}

bool check_eci_general(const RegimeFamily& fam, const CIStatement& s) {
  if (s.left.empty() || s.right.empty())
    throw Error(ErrorCode::malformed_statement, "outer slots must be non-empty");
  const Mask K = s.left.dec, Th = s.right.dec, Ph = s.cond.dec;
  if (!check_complementary(fam, K | Th | Ph))
    throw Error(ErrorCode::not_complementary, "decision variables do not separate the regimes");
  const Mask X = s.left.stoch, Y = s.right.stoch, Z = s.cond.stoch;

  auto eci = [&](Mask left, VarSet right, VarSet cond) {
    std::vector<std::uint64_t> codes;
    const auto groups = groups_by(fam, cond.dec, all_regimes(fam), &codes);
    return eci_on(fam, groups, codes, {stochastic_set(left), right, cond}, nullptr);
  };
  // X ⊥ (Y,Θ) | (Z,Φ,K)
  if (X != 0 && !eci(X, {Y, Th}, {Z, Ph | K})) return false;
  // Y ⊥ K | (Z,Φ,Θ)
  if (Y != 0 && K != 0 && !eci(Y, decision_set(K), {Z, Ph | Th})) return false;
  // Θ ⊥ K | Φ on every 𝒮_z
  if (Th != 0 && K != 0) {
    const auto cards = cards_of(fam.variables());
    std::array<int, 64> vals{};
    bool ok = true;
    for_each_assignment(cards, Z, vals.data(), [&] {
      if (!ok) return;
      const auto sz = compute_S_z(fam, Z, decode_values(vals.data(), Z));
      if (!sz.empty() && !check_vci(fam, Th, K, Ph, sz)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace eci
