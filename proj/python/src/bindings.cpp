#include "eci/causal.hpp"
#include "eci/checks.hpp"
#include "eci/cli.hpp"
#include "eci/deduction.hpp"
#include "eci/dsl.hpp"
#include "eci/error.hpp"
#include "eci/model_io.hpp"
#include "eci/search.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <set>
#include <sstream>

namespace py = pybind11;
using namespace eci;

namespace {

// Names in order of first appearance; `decisions` become decision variables,
// each complementary on its own.
struct Env {
  Universe u;
  ReductionRegistry reg;
  ComplementarityDecl comp;
};

Env make_env(const std::vector<std::string>& texts, const std::vector<std::string>& decisions) {
  Env e;
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& t : texts) {
    const RawStatement raw = parse_raw_statement(t);
    for (const auto* part : {&raw.left, &raw.right, &raw.cond})
      for (const auto& n : *part)
        if (seen.insert(n).second) order.push_back(n);
  }
  for (const auto& d : decisions)
    if (seen.insert(d).second) order.push_back(d);
  const std::set<std::string> dec(decisions.begin(), decisions.end());
  for (const auto& n : order) e.u.declare(n, dec.count(n) ? VarKind::decision : VarKind::stochastic);
  for (int i = 0; i < e.u.size(VarKind::decision); ++i) e.comp.add(Mask{1} << i);
  return e;
}

Flags to_flags(const std::vector<std::string>& names) {
  Flags f;
  for (const auto& n : names) {
    const auto x = flag_from_name(n);
    if (!x) throw Error(ErrorCode::invalid_argument, "unknown flag '" + n + "'");
    f.set(*x);
  }
  return f;
}

RuleSet choose(const std::string& rules, const Flags& flags, const std::vector<CIStatement>& stmts) {
  if (!rules.empty()) return RuleSet::named(rules, flags);
  auto all = [&](auto pred) { return std::all_of(stmts.begin(), stmts.end(), pred); };
  if (std::any_of(stmts.begin(), stmts.end(), [](auto& s) { return s.is_general(); }))
    return RuleSet::make(RuleSetName::general, flags);
  if (all([](auto& s) { return s.is_pure_stochastic(); })) return RuleSet::make(RuleSetName::separoid_full, flags);
  if (all([](auto& s) { return s.is_pure_decision(); })) return RuleSet::make(RuleSetName::vci_strong, flags);
  return RuleSet::make(RuleSetName::eci_restricted, flags);
}

std::string derive(const std::string& goal, const std::vector<std::string>& premises,
                   const std::vector<std::string>& decisions, const std::string& rules,
                   const std::vector<std::string>& flags, std::size_t max_depth) {
  std::vector<std::string> texts = premises;
  texts.push_back(goal);
  const Env e = make_env(texts, decisions);
  std::vector<CIStatement> prem;
  for (const auto& p : premises) prem.push_back(parse_statement(e.u, p));
  const CIStatement g = parse_statement(e.u, goal);
  std::vector<CIStatement> all = prem;
  all.push_back(g);
  const RuleSet rs = choose(rules, to_flags(flags), all);
  Limits lim;
  lim.max_depth = max_depth;
  const auto r = prove(g, prem, {e.u, e.reg, e.comp, rs}, lim);
  Json j;
  j["goal"] = render(e.u, g);
  j["rules"] = rule_set_name(rs.name);
  j["derived"] = r.derivation.has_value();
  j["truncated"] = r.truncated;
  if (r.derivation) {
    j["steps"] = r.derivation->rule_applications();
    j["proof"] = format_proof(e.u, *r.derivation);
    j["derivation"] = derivation_to_json(e.u, *r.derivation);
  }
  return j.dump();
}

std::vector<std::string> closure_of(const std::vector<std::string>& premises, const std::vector<std::string>& decisions,
                               const std::string& rules, const std::vector<std::string>& flags) {
  const Env e = make_env(premises, decisions);
  std::vector<CIStatement> prem;
  for (const auto& p : premises) prem.push_back(parse_statement(e.u, p));
  const RuleSet rs = choose(rules, to_flags(flags), prem);
  const auto c = closure(prem, {e.u, e.reg, e.comp, rs});
  if (c.truncated) throw Error(ErrorCode::invalid_argument, "closure truncated by limits");
  std::vector<std::string> out;
  for (const auto& s : c.statements) out.push_back(render(e.u, s));
  return out;
}

bool check(const std::string& model, const std::string& statement, const std::string& semantics) {
  Model m = model_from_json(Json::parse(model));
  if (m.family.decision_index("Sigma") < 0 && m.family.dist(0).index_of("Sigma") < 0) m.family.ensure_identity();
  const RegimeFamily& fam = m.family;
  const CIStatement s = parse_statement(universe_of(fam), statement);
  std::string sem = semantics;
  std::transform(sem.begin(), sem.end(), sem.begin(), [](unsigned char c) { return std::toupper(c); });
  if (sem.empty()) {
    if (s.is_pure_decision()) sem = "VCI";
    else if (s.is_general()) sem = "GENERAL";
    else if (s.is_pure_stochastic() && fam.regime_count() == 1) sem = "SCI";
    else sem = "ECI";
  }
  if (sem == "SCI") return evaluate(fam, s, Semantics::sci);
  if (sem == "VCI") return check_vci(fam, s);
  if (sem == "ECI") return check_eci(fam, s).holds;
  if (sem == "PAIRWISE") return check_pairwise_eci(fam, s);
  if (sem == "GENERAL") return check_eci_general(fam, s);
  throw Error(ErrorCode::invalid_argument, "unknown semantics '" + semantics + "'");
}

std::optional<std::string> search(const std::string& goal, const std::vector<std::string>& premises,
                                  const std::vector<std::string>& decisions, const std::string& semantics,
                                  std::uint64_t seed, std::uint64_t trials, int grid, int regimes) {
  std::vector<std::string> texts = premises;
  texts.push_back(goal);
  const Env e = make_env(texts, decisions);
  std::vector<CIStatement> prem;
  for (const auto& p : premises) prem.push_back(parse_statement(e.u, p));
  const auto sem = semantics_from_name(semantics);
  if (!sem) throw Error(ErrorCode::invalid_argument, "unknown semantics '" + semantics + "'");
  SearchConfig cfg;
  cfg.seed = seed;
  cfg.trials = trials;
  cfg.grid = grid;
  cfg.regime_count = regimes;
  const auto cx = search_counterexample(e.u, prem, parse_statement(e.u, goal), cfg, *sem);
  if (!cx) return std::nullopt;
  return cx->serialized().dump();
}

bool verify(const std::string& serialized) {
  std::string why;
  return verify_counterexample(Json::parse(serialized), &why);
}

std::string scan(const std::string& rules, const std::vector<std::string>& flags, int vars, int decisions,
                 int regimes, std::uint64_t trials, std::uint64_t seed, int grid, bool identity) {
  const RuleSet rs = RuleSet::named(rules, to_flags(flags));
  SearchConfig cfg;
  cfg.seed = seed;
  cfg.trials = trials;
  cfg.grid = grid;
  cfg.regime_count = regimes;
  cfg.include_identity = identity;
  for (int i = 0; i < vars; ++i) cfg.var_cardinalities.emplace_back("V" + std::to_string(i + 1), 2);
  for (int i = 0; i < decisions; ++i) cfg.decision_cardinalities.emplace_back("D" + std::to_string(i + 1), 2);
  return axiom_soundness_scan(cfg, rs).to_json().dump();
}

std::string product(const std::string& model, const std::vector<std::string>& prior) {
  const Model m = model_from_json(Json::parse(model));
  std::vector<Rational> p;
  if (prior.empty()) {
    for (int r = 0; r < m.family.regime_count(); ++r) p.emplace_back(1, m.family.regime_count());
  } else {
    for (const auto& x : prior) p.push_back(rational_from_json(Json(x)));
  }
  return distribution_to_json(product_space(m.family, p)).dump();
}

std::string average_effect(const std::string& model, const std::string& response, const std::string& treatment,
                           const std::string& obs, const std::string& do0, const std::string& do1) {
  const Model m = model_from_json(Json::parse(model));
  return ace(m.family, response, treatment, {obs, do0, do1}).to_json().dump();
}

std::string gformula(const std::string& model, const std::string& strategy,
                     const std::map<std::string, std::string>& k, const std::string& obs) {
  const Model m = model_from_json(Json::parse(model));
  std::map<std::string, Rational> km;
  for (const auto& [label, v] : k) km[label] = rational_from_json(Json(v));
  return to_string(g_formula(m.family, strategy_from_json(Json::parse(strategy)), km, obs));
}

py::tuple cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Extended conditional independence: deduction, finite-model checks, search";

  static PyObject* eci_error = py::register_exception<Error>(m, "EciError", PyExc_ValueError).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(eci_error, (std::string(error_code_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def("derive", &derive, py::arg("goal"), py::arg("premises"), py::arg("decisions") = std::vector<std::string>{},
        py::arg("rules") = "", py::arg("flags") = std::vector<std::string>{}, py::arg("max_depth") = 64,
        "Shortest derivation of `goal`; JSON text.");
  m.def("closure", &closure_of, py::arg("premises"), py::arg("decisions") = std::vector<std::string>{},
        py::arg("rules") = "", py::arg("flags") = std::vector<std::string>{});
  m.def("check", &check, py::arg("model"), py::arg("statement"), py::arg("semantics") = "",
        "Evaluates a statement on a model given as JSON text.");
  m.def("search_counterexample", &search, py::arg("goal"), py::arg("premises"),
        py::arg("decisions") = std::vector<std::string>{}, py::arg("semantics") = "SCI", py::arg("seed") = 0,
        py::arg("trials") = 1000, py::arg("grid") = 4, py::arg("regimes") = 1);
  m.def("verify_counterexample", &verify, py::arg("serialized"));
  m.def("scan_axioms", &scan, py::arg("rules") = "SEPAROID_FULL", py::arg("flags") = std::vector<std::string>{},
        py::arg("vars") = 4, py::arg("decisions") = 0, py::arg("regimes") = 1, py::arg("trials") = 100,
        py::arg("seed") = 0, py::arg("grid") = 4, py::arg("identity") = true);
  m.def("product_space", &product, py::arg("model"), py::arg("prior") = std::vector<std::string>{});
  m.def("ace", &average_effect, py::arg("model"), py::arg("response") = "Y", py::arg("treatment") = "T",
        py::arg("obs") = "obs", py::arg("do0") = "do0", py::arg("do1") = "do1");
  m.def("g_formula", &gformula, py::arg("model"), py::arg("strategy"), py::arg("k"), py::arg("obs") = "obs");
  m.def("run_cli", &cli, py::arg("args"), "Runs the command-line front end in-process: (code, stdout, stderr).");
}
