#include <doctest.h>

#include "eci/deduction.hpp"
#include "eci/dsl.hpp"
#include "eci/error.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

using namespace eci;

namespace {

struct Env {
  Universe u;
  ReductionRegistry reg;
  ComplementarityDecl comp;
  RuleSet rs;
  RuleContext ctx() const { return {u, reg, comp, rs}; }
  CIStatement st(std::string_view t) const { return parse_statement(u, t); }
};

Env separoid(std::vector<std::string> vars) {
  return {Universe(vars, {}), {}, {}, RuleSet::make(RuleSetName::separoid_full)};
}

Env eci_env(Flags flags = {}) {
  Env e{Universe({"X", "Y", "Z"}, {"Theta", "Phi"}), {}, {}, RuleSet::make(RuleSetName::eci_restricted, flags)};
  e.comp.add(e.u.all(VarKind::decision));
  return e;
}

void rule_sequence(const Derivation& d, std::vector<std::string>& out) {
  for (const auto& c : d.children) rule_sequence(c, out);
  if (!d.is_premise()) out.push_back(d.rule);
}

// Independent oracle: naive fixpoint of the unrestricted separoid rules on
// pure stochastic statements, subset reductions only.
using Triple = std::tuple<Mask, Mask, Mask>;
std::set<Triple> naive_closure(int n, const std::set<Triple>& premises) {
  const Mask all = (Mask{1} << n) - 1;
  std::set<Triple> known = premises;
  for (Mask x = 1; x <= all; ++x)
    for (Mask y = 1; y <= all; ++y) known.insert({x, y, y});
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<Triple> add;
    for (auto [x, y, z] : known) {
      add.insert({y, x, z});
      for (Mask w = 1; w <= all; ++w) {
        if ((w & ~y) != 0) continue;
        add.insert({x, w, z});
        add.insert({x, y, z | w});
      }
      for (auto [x2, w, c] : known)
        if (x2 == x && c == (y | z)) add.insert({x, y | w, z});
    }
    for (const auto& t : add)
      if (known.insert(t).second) changed = true;
  }
  return known;
}

}  // namespace

TEST_CASE("worked example: (X,Z) _||_ Y | Z in five steps") {
  const Env e = separoid({"X", "Y", "Z"});
  const auto r = prove(e.st("X, Z _||_ Y | Z"), {e.st("X _||_ Y | Z")}, e.ctx());
  REQUIRE(r);
  CHECK(r.derivation->rule_applications() == 5);
  std::vector<std::string> seq;
  rule_sequence(*r.derivation, seq);
  CHECK(seq == std::vector<std::string>{"P1", "P2", "P3", "P5", "P1"});
  const std::string text = format_proof(e.u, *r.derivation);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
  CHECK(text.rfind("6. X, Z _||_ Y | Z [P1 from 5]") != std::string::npos);
  CHECK(replay(*r.derivation, {e.st("X _||_ Y | Z")}, e.ctx()));
}

TEST_CASE("premise goal needs no rule applications") {
  const Env e = separoid({"X", "Y", "Z"});
  const auto r = prove(e.st("X _||_ Y | Z"), {e.st("X _||_ Y | Z")}, e.ctx());
  REQUIRE(r);
  CHECK(r.derivation->rule_applications() == 0);
  CHECK(format_proof(e.u, *r.derivation) == "1. X _||_ Y | Z [premise]\n");
}

TEST_CASE("marginal independence does not follow from conditional independence") {
  const Env e = separoid({"X", "Y", "Z"});
  const auto r = prove(e.st("X _||_ Y"), {e.st("X _||_ Y | Z")}, e.ctx());
  CHECK_FALSE(r);
  CHECK_FALSE(r.truncated);
}

TEST_CASE("nearest-neighbour property of a Markov chain") {
  const Env e = separoid({"X1", "X2", "X3", "X4", "X5"});
  const std::vector<CIStatement> prem{e.st("X3 _||_ X1 | X2"), e.st("X4 _||_ X1, X2 | X3"),
                                      e.st("X5 _||_ X1, X2, X3 | X4")};
  const auto r = prove(e.st("X3 _||_ X1, X5 | X2, X4"), prem, e.ctx());
  REQUIRE(r);
  CHECK(replay(*r.derivation, prem, e.ctx()));
  const auto c = closure(prem, e.ctx());
  CHECK(std::binary_search(c.statements.begin(), c.statements.end(), e.st("X3 _||_ X1, X5 | X2, X4")));
}

TEST_CASE("apply_rule examples") {
  Env e = separoid({"X", "Y", "Z", "W"});
  const auto p2 = apply_rule(RuleId::P2, {}, e.ctx());
  CHECK(std::binary_search(p2.begin(), p2.end(), e.st("X _||_ Y | Y")));
  CHECK(std::binary_search(p2.begin(), p2.end(), e.st("Y _||_ X | X")));
  CHECK(p2.size() == 15 * 15);

  const auto p3 = apply_rule(RuleId::P3, {e.st("X _||_ Y, W | Z")}, e.ctx());
  CHECK(std::binary_search(p3.begin(), p3.end(), e.st("X _||_ W | Z")));
  CHECK(std::binary_search(p3.begin(), p3.end(), e.st("X _||_ Y | Z")));
  CHECK(p3.size() == 2);

  e.reg.add(e.u, "W", "Y");
  const auto p3r = apply_rule(RuleId::P3, {e.st("X _||_ Y | Z")}, e.ctx());
  CHECK(std::binary_search(p3r.begin(), p3r.end(), e.st("X _||_ W | Z")));

  const Env g = eci_env();
  try {
    apply_rule(RuleId::P1r, {g.st("X _||_ Y, Theta | Z, Phi")}, g.ctx());
    FAIL("expected GuardViolation");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::guard_violation);
  }
  CHECK_THROWS_AS(apply_rule(RuleId::P1, {g.st("X _||_ Y, Theta | Z, Phi")}, e.ctx()), Error);
}

TEST_CASE("restricted contraction yields the same closure as the unrestricted one") {
  std::mt19937_64 rng(42);
  const int n = 3;
  const Env e = separoid({"A", "B", "C"});
  for (int round = 0; round < 40; ++round) {
    std::set<Triple> prem;
    std::vector<CIStatement> premises;
    const int k = 1 + static_cast<int>(rng() % 2);
    for (int i = 0; i < k; ++i) {
      Mask x = 1 + rng() % 7, y = 1 + rng() % 7, z = rng() % 8;
      prem.insert({x, y, z});
      premises.push_back({stochastic_set(x), stochastic_set(y), stochastic_set(z)});
    }
    const auto oracle = naive_closure(n, prem);
    const auto got = closure(premises, e.ctx());
    CHECK_FALSE(got.truncated);
    std::set<Triple> mine;
    for (const auto& s : got.statements) mine.insert({s.left.stoch, s.right.stoch, s.cond.stoch});
    CHECK(mine == oracle);
  }
}

TEST_CASE("closure is independent of premise order and monotone") {
  const Env e = separoid({"A", "B", "C", "D"});
  std::vector<CIStatement> prem{e.st("A _||_ B | C"), e.st("D _||_ A, B"), e.st("C _||_ D | A")};
  const auto base = closure(prem, e.ctx());
  std::sort(prem.begin(), prem.end());
  do {
    CHECK(closure(prem, e.ctx()).statements == base.statements);
  } while (std::next_permutation(prem.begin(), prem.end()));
  const auto smaller = closure({prem[0]}, e.ctx());
  CHECK(std::includes(base.statements.begin(), base.statements.end(), smaller.statements.begin(),
                      smaller.statements.end()));
}

TEST_CASE("limits truncate instead of failing") {
  const Env e = separoid({"A", "B", "C", "D"});
  const auto c = closure({e.st("A _||_ B | C")}, e.ctx(), {50, 64});
  CHECK(c.truncated);
  CHECK(c.statements.size() == 50);
  const auto r = prove(e.st("A, C _||_ B | C"), {e.st("A _||_ B | C")}, e.ctx(), {50, 64});
  CHECK_FALSE(r);
  CHECK(r.truncated);
}

TEST_CASE("proof text and JSON round trip through the verifier") {
  const Env e = separoid({"X", "Y", "Z"});
  const std::vector<CIStatement> prem{e.st("X _||_ Y | Z")};
  const auto r = prove(e.st("X, Z _||_ Y | Z"), prem, e.ctx());
  REQUIRE(r);
  const Derivation parsed = parse_proof(e.u, format_proof(e.u, *r.derivation));
  CHECK(parsed.rule_applications() == 5);
  CHECK(replay(parsed, prem, e.ctx()));
  const Derivation fromj = derivation_from_json(e.u, derivation_to_json(e.u, *r.derivation));
  CHECK(replay(fromj, prem, e.ctx()));

  // a step citing a missing line
  CHECK_THROWS_AS(parse_proof(e.u, "1. X _||_ Y | Z [premise]\n2. Y _||_ X | Z [P1 from 7]\n"), ParseError);
  // a rule citing the wrong number of children
  Derivation bad = *r.derivation;
  bad.children.clear();
  std::string why;
  CHECK_FALSE(replay(bad, prem, e.ctx(), &why));
  CHECK_FALSE(why.empty());
  // a wrong conclusion
  Derivation wrong = parse_proof(e.u, "1. X _||_ Y | Z [premise]\n2. Y _||_ X [P1 from 1]\n");
  CHECK_FALSE(replay(wrong, prem, e.ctx()));
  // a leaf that is not a premise
  CHECK_FALSE(replay(parse_proof(e.u, "1. X _||_ Z [premise]\n"), prem, e.ctx()));
}

TEST_CASE("ECI decomposition is inter-derivable with its two components") {
  const Env e = eci_env();
  const auto whole = e.st("X _||_ Y, Theta | Z, Phi");
  const auto a = e.st("X _||_ Y | Z, Phi, Theta");
  const auto b = e.st("X _||_ Theta | Z, Phi");
  REQUIRE(prove(a, {whole}, e.ctx()));
  REQUIRE(prove(b, {whole}, e.ctx()));
  const auto back = prove(whole, {a, b}, e.ctx());
  REQUIRE(back);
  CHECK(replay(*back.derivation, {a, b}, e.ctx()));
}

TEST_CASE("ECI symmetry needs stochastic outer slots") {
  const Env e = eci_env();
  CHECK(prove(e.st("Y _||_ X | Z, Theta, Phi"), {e.st("X _||_ Y | Z, Theta, Phi")}, e.ctx()));
  // Theta cannot move to the left slot
  CHECK_THROWS_AS(prove(e.st("Y, Theta _||_ X | Z, Phi"), {e.st("X _||_ Y, Theta | Z, Phi")}, e.ctx()),
                  Error);
}

TEST_CASE("mirror weak union needs a licensing flag") {
  Env plain = eci_env();
  const auto prem = plain.st("X, Y _||_ Theta | Phi");
  const auto goal = plain.st("X, Y _||_ Theta | Y, Phi");
  const auto none = prove(goal, {prem}, plain.ctx());
  CHECK_FALSE(none);
  CHECK_FALSE(none.truncated);

  const Env flagged = eci_env({Flag::discrete_variables});
  const auto r = prove(goal, {prem}, flagged.ctx());
  REQUIRE(r);
  CHECK(r.derivation->rule == "P4''");
  REQUIRE(r.derivation->license);
  CHECK(*r.derivation->license == Flag::discrete_variables);
  const std::string text = format_proof(flagged.u, *r.derivation);
  CHECK(text.find("[P4'' from 1; licensed by discrete_variables]") != std::string::npos);
  CHECK(replay(parse_proof(flagged.u, text), {prem}, flagged.ctx()));
  // the same proof is rejected without the flag
  CHECK_FALSE(replay(*r.derivation, {prem}, plain.ctx()));
}

TEST_CASE("VCI_STRONG and GENERAL rule sets") {
  Env v{Universe({}, {"A", "B", "C"}), {}, {}, RuleSet::make(RuleSetName::vci_strong)};
  CHECK(prove(v.st("A, C _||_ B | C"), {v.st("A _||_ B | C")}, v.ctx()));

  Env g{Universe({"X", "Y", "Z"}, {"K", "Theta", "Phi"}), {}, {}, RuleSet::make(RuleSetName::general)};
  g.comp.add(g.u.all(VarKind::decision));
  const auto prem = g.st("X, K _||_ Y, Theta | Z, Phi");
  CHECK(prove(g.st("Y, Theta _||_ X, K | Z, Phi"), {prem}, g.ctx()));
  CHECK(prove(g.st("X, K _||_ Theta | Z, Phi"), {prem}, g.ctx()));
  CHECK_FALSE(prove(g.st("X, K _||_ Y | Z, Phi, Theta"), {prem}, g.ctx()));
  g.rs = RuleSet::make(RuleSetName::general, {Flag::dominating_regime});
  CHECK(prove(g.st("X, K _||_ Y | Z, Phi, Theta"), {prem}, g.ctx()));
}
