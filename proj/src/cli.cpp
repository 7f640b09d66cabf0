#include "eci/cli.hpp"

#include "eci/causal.hpp"
#include "eci/checks.hpp"
#include "eci/deduction.hpp"
#include "eci/dsl.hpp"
#include "eci/error.hpp"
#include "eci/model_io.hpp"
#include "eci/search.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

namespace eci {

namespace {

struct Options {
  std::string universe_file;
  std::vector<std::string> premises;
  std::vector<std::string> decisions;
  std::string rules;
  std::vector<std::string> flags;
  std::size_t max_steps = Limits{}.max_depth;
  std::size_t max_stmts = Limits{}.max_statements;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000;
  int grid = 4;
  int regimes = 0;  // 0: per-command default
  int vars = -1;
  int decision_vars = -1;
  bool exhaustive = false;
  std::string semantics;
  bool json = false;
  std::string out_file;

  std::string goal;
  std::string model;
  std::string statement;
  std::string prior;
  std::string strategy;
  std::string response = "Y";
  std::string treatment = "T";
  AceLabels labels;
  std::string obs = "obs";
  std::string k;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_argument, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string decimal(const Rational& r) {
  std::ostringstream os;
  os << std::setprecision(12) << to_double(r);
  return os.str();
}

Flags parse_flags(const std::vector<std::string>& names) {
  Flags f;
  for (const auto& n : names) {
    const auto fl = flag_from_name(n);
    if (!fl) throw Error(ErrorCode::invalid_argument, "unknown flag '" + n + "'");
    f.set(*fl);
  }
  return f;
}

// Universe, reductions, complementarity and premises for the symbolic
// commands: from a declaration file, or inferred from the statements
// (every name stochastic unless listed with --decision; each decision
// variable is taken to be complementary on its own).
struct Session {
  Declarations decl;
  std::vector<CIStatement> premises;
};

Session make_session(const Options& o, const std::vector<std::string>& extra) {
  Session s;
  if (!o.universe_file.empty()) {
    s.decl = parse_declarations(read_file(o.universe_file));
  } else {
    std::vector<std::string> texts = o.premises;
    texts.insert(texts.end(), extra.begin(), extra.end());
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const auto& t : texts) {
      const RawStatement raw = parse_raw_statement(t);
      for (const auto* part : {&raw.left, &raw.right, &raw.cond})
        for (const auto& n : *part)
          if (seen.insert(n).second) order.push_back(n);
    }
    for (const auto& d : o.decisions)
      if (seen.insert(d).second) order.push_back(d);
    const std::set<std::string> dec(o.decisions.begin(), o.decisions.end());
    for (const auto& n : order)
      s.decl.universe.declare(n, dec.count(n) ? VarKind::decision : VarKind::stochastic);
    for (int i = 0; i < s.decl.universe.size(VarKind::decision); ++i) s.decl.complements.add(Mask{1} << i);
  }
  s.premises = s.decl.premises;
  for (const auto& p : o.premises) s.premises.push_back(parse_statement(s.decl.universe, p));
  return s;
}

RuleSet pick_rules(const Options& o, const std::vector<CIStatement>& stmts) {
  const Flags flags = parse_flags(o.flags);
  if (!o.rules.empty()) return RuleSet::named(upper(o.rules), flags);
  const bool general = std::any_of(stmts.begin(), stmts.end(), [](auto& s) { return s.is_general(); });
  const bool pure_s = std::all_of(stmts.begin(), stmts.end(), [](auto& s) { return s.is_pure_stochastic(); });
  const bool pure_d = std::all_of(stmts.begin(), stmts.end(), [](auto& s) { return s.is_pure_decision(); });
  if (general) return RuleSet::make(RuleSetName::general, flags);
  if (pure_s) return RuleSet::make(RuleSetName::separoid_full, flags);
  if (pure_d) return RuleSet::make(RuleSetName::vci_strong, flags);
  return RuleSet::make(RuleSetName::eci_restricted, flags);
}

Json flags_json(const Flags& f) {
  Json j = Json::array();
  for (Flag x : f.list()) j.push_back(flag_name(x));
  return j;
}

void print_json(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

int cmd_derive(const Options& o, std::ostream& out) {
  Session s = make_session(o, {o.goal});
  const CIStatement goal = parse_statement(s.decl.universe, o.goal);
  auto all = s.premises;
  all.push_back(goal);
  const RuleSet rs = pick_rules(o, all);
  const RuleContext ctx{s.decl.universe, s.decl.reductions, s.decl.complements, rs};
  const Limits lim{o.max_stmts, o.max_steps};
  const auto r = prove(goal, s.premises, ctx, lim);
  const Universe& u = s.decl.universe;
  if (o.json) {
    Json j;
    j["goal"] = render(u, goal);
    j["rules"] = rule_set_name(rs.name);
    j["flags"] = flags_json(rs.flags);
    j["premises"] = Json::array();
    for (const auto& p : s.premises) j["premises"].push_back(render(u, p));
    j["derived"] = r.derivation.has_value();
    j["truncated"] = r.truncated;
    if (r.derivation) {
      j["steps"] = r.derivation->rule_applications();
      j["proof"] = derivation_to_json(u, *r.derivation);
    }
    print_json(out, j);
  } else if (r.derivation) {
    const std::size_t n = r.derivation->rule_applications();
    out << "derived " << render(u, goal) << " in " << n << (n == 1 ? " step (" : " steps (")
        << rule_set_name(rs.name) << ")\n"
        << format_proof(u, *r.derivation);
  } else {
    out << (r.truncated ? "not derived (search limits reached, inconclusive): "
                        : "not derivable: ")
        << render(u, goal) << "\n";
  }
  return r.derivation ? 0 : 1;
}

int cmd_close(const Options& o, std::ostream& out) {
  Session s = make_session(o, {});
  const RuleSet rs = pick_rules(o, s.premises);
  const RuleContext ctx{s.decl.universe, s.decl.reductions, s.decl.complements, rs};
  const auto c = closure(s.premises, ctx, Limits{o.max_stmts, o.max_steps});
  const Universe& u = s.decl.universe;
  if (o.json) {
    Json j;
    j["rules"] = rule_set_name(rs.name);
    j["flags"] = flags_json(rs.flags);
    j["truncated"] = c.truncated;
    j["count"] = c.statements.size();
    j["statements"] = Json::array();
    for (const auto& st : c.statements) j["statements"].push_back(render(u, st));
    print_json(out, j);
  } else {
    out << c.statements.size() << " statements (" << rule_set_name(rs.name) << ")"
        << (c.truncated ? ", truncated" : "") << "\n";
    for (const auto& st : c.statements) out << render(u, st) << "\n";
  }
  return 0;
}

std::string auto_semantics(const CIStatement& s, const RegimeFamily& fam) {
  if (s.is_pure_decision()) return "VCI";
  if (s.is_general()) return "GENERAL";
  if (s.is_pure_stochastic() && fam.regime_count() == 1) return "SCI";
  return "ECI";
}

int cmd_check(const Options& o, std::ostream& out) {
  Model m = load_model(o.model);
  // Families without a declared regime identity get one named Sigma.
  if (m.family.decision_index("Sigma") < 0 && m.family.dist(0).index_of("Sigma") < 0) m.family.ensure_identity();
  const RegimeFamily& fam = m.family;
  const Universe u = universe_of(fam);
  const CIStatement s = parse_statement(u, o.statement);
  const std::string sem = o.semantics.empty() ? auto_semantics(s, fam) : upper(o.semantics);
  bool holds = false;
  std::optional<WitnessTable> witness;
  if (sem == "SCI") {
    holds = evaluate(fam, s, Semantics::sci);
  } else if (sem == "VCI") {
    holds = check_vci(fam, s);
  } else if (sem == "ECI") {
    auto r = check_eci(fam, s, true);
    holds = r.holds;
    witness = std::move(r.witness);
  } else if (sem == "PAIRWISE") {
    holds = check_pairwise_eci(fam, s);
  } else if (sem == "GENERAL") {
    holds = check_eci_general(fam, s);
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown semantics '" + o.semantics + "'");
  }
  if (o.json) {
    Json j;
    j["statement"] = render(u, s);
    j["semantics"] = sem;
    j["holds"] = holds;
    if (witness && holds) {
      Json w = Json::array();
      const auto& vars = fam.variables();
      auto labels = [&](Mask mask, const std::vector<int>& vals) {
        Json a = Json::object();
        std::size_t k = 0;
        for (int v = 0; v < static_cast<int>(vars.size()); ++v)
          if (mask >> v & 1) a[vars[v].name] = vars[v].values[static_cast<std::size_t>(vals[k++])];
        return a;
      };
      for (const auto& [key, p] : witness->entries) {
        const auto& [phi, x, z] = key;
        w.push_back({{"phi", phi}, {"x", labels(witness->x, x)}, {"z", labels(witness->z, z)},
                     {"p", to_string(p)}});
      }
      j["witness"] = w;
    }
    print_json(out, j);
  } else {
    out << render(u, s) << " [" << sem << "]: " << (holds ? "true" : "false") << "\n";
  }
  return holds ? 0 : 1;
}

int cmd_search(const Options& o, std::ostream& out) {
  Session s = make_session(o, {o.goal});
  const Universe& u = s.decl.universe;
  const CIStatement goal = parse_statement(u, o.goal);
  auto all = s.premises;
  all.push_back(goal);
  Semantics sem;
  if (!o.semantics.empty()) {
    const auto x = semantics_from_name(o.semantics);
    if (!x) throw Error(ErrorCode::invalid_argument, "unknown semantics '" + o.semantics + "'");
    sem = *x;
  } else if (std::all_of(all.begin(), all.end(), [](auto& t) { return t.is_pure_stochastic(); })) {
    sem = Semantics::sci;
  } else if (std::all_of(all.begin(), all.end(), [](auto& t) { return t.is_pure_decision(); })) {
    sem = Semantics::vci;
  } else {
    sem = Semantics::eci;
  }
  SearchConfig cfg;
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  cfg.grid = o.grid;
  cfg.regime_count = o.regimes > 0 ? o.regimes : (sem == Semantics::sci ? 1 : 3);
  cfg.exhaustive = o.exhaustive;
  const auto cx = search_counterexample(u, s.premises, goal, cfg, sem);
  if (!cx) {
    if (o.json) {
      print_json(out, {{"found", false}, {"trials", cfg.trials}, {"semantics", semantics_name(sem)}});
    } else {
      out << "no counterexample in " << cfg.trials << " trials (" << semantics_name(sem) << ")\n";
    }
    return 0;
  }
  const Json ser = cx->serialized();
  if (!o.out_file.empty()) save_json(o.out_file, ser);
  if (o.json) {
    print_json(out, {{"found", true}, {"trial", cx->trial}, {"counterexample", ser}});
  } else {
    out << "counterexample at trial " << cx->trial << " (" << semantics_name(sem) << ")\n";
    for (const auto& p : cx->report["premises"])
      out << "  premise " << p["statement"].get<std::string>() << ": true\n";
    out << "  goal " << cx->report["goal"]["statement"].get<std::string>() << ": false\n";
    out << ser.dump(2) << "\n";
  }
  return 1;
}

int cmd_product(const Options& o, std::ostream& out) {
  const Model m = load_model(o.model);
  const int n = m.family.regime_count();
  std::vector<Rational> prior;
  if (o.prior == "uniform") {
    prior.assign(static_cast<std::size_t>(n), Rational(1, n));
  } else {
    std::stringstream ss(o.prior);
    std::string item;
    while (std::getline(ss, item, ',')) prior.push_back(parse_rational(item));
  }
  const auto d = product_space(m.family, prior);
  print_json(out, distribution_to_json(d));
  return 0;
}

int cmd_ace(const Options& o, std::ostream& out) {
  const Model m = load_model(o.model);
  const AceResult r = ace(m.family, o.response, o.treatment, o.labels);
  if (o.json) {
    print_json(out, r.to_json());
  } else {
    out << "ace_interventional: " << to_string(r.ace_interventional) << " ("
        << decimal(r.ace_interventional) << ")\n";
    out << "ace_observational: "
        << (r.ace_observational ? to_string(*r.ace_observational) + " (" + decimal(*r.ace_observational) + ")"
                                : std::string("undefined (an observational arm has no mass)"))
        << "\n";
    out << "transfer_valid: " << (r.transfer_valid ? "true" : "false") << "\n";
  }
  return r.transfer_valid ? 0 : 1;
}

int cmd_gformula(const Options& o, std::ostream& out) {
  const Model m = load_model(o.model);
  const RegimeFamily& fam = m.family;
  const Strategy strat = strategy_from_json(load_json(o.strategy));
  if (!fam.info_base()) throw Error(ErrorCode::invalid_model, "model has no info base");
  const auto& ib = *fam.info_base();
  const int y = fam.dist(0).index_of(ib.observables.back().back());
  const auto& yvar = fam.variables()[static_cast<std::size_t>(y)];
  std::map<std::string, Rational> k;
  if (o.k.empty()) {
    for (const auto& label : yvar.values) k[label] = parse_rational(label);
  } else {
    std::stringstream ss(o.k);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::invalid_argument, "expected label=value in --k");
      k[item.substr(0, eq)] = parse_rational(item.substr(eq + 1));
    }
  }
  const Rational v = g_formula(fam, strat, k, o.obs);
  std::optional<Rational> direct;
  if (const int r = fam.regime_index(strat.regime); r >= 0) {
    Rational e = 0;
    for (const auto& [key, p] : fam.dist(r).marginal(Mask{1} << y))
      e += p * k.at(yvar.values[static_cast<std::size_t>(key[0])]);
    direct = e;
  }
  if (o.json) {
    Json j;
    j["value"] = to_string(v);
    j["decimal"] = to_double(v);
    j["direct"] = direct ? Json(to_string(*direct)) : Json(nullptr);
    print_json(out, j);
  } else {
    out << "E_" << strat.regime << "[k(" << yvar.name << ")] = " << to_string(v) << " (" << decimal(v)
        << ")\n";
    if (direct)
      out << "direct expectation in regime " << strat.regime << ": " << to_string(*direct)
          << (*direct == v ? " (agrees)" : " (differs)") << "\n";
  }
  return 0;
}

int cmd_scan(const Options& o, std::ostream& out) {
  const RuleSet rs = RuleSet::named(upper(o.rules.empty() ? "SEPAROID_FULL" : o.rules), parse_flags(o.flags));
  SearchConfig cfg;
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  cfg.grid = o.grid;
  cfg.exhaustive = o.exhaustive;
  int nv = 3, nd = 1, nr = 2;
  switch (rs.name) {
    case RuleSetName::separoid_full: nv = 4; nd = 0; nr = 1; break;
    case RuleSetName::vci_strong: nv = 0; nd = 3; nr = 3; cfg.include_identity = false; break;
    default: break;
  }
  if (o.vars >= 0) nv = o.vars;
  if (o.decision_vars >= 0) nd = o.decision_vars;
  if (o.regimes > 0) nr = o.regimes;
  cfg.regime_count = nr;
  for (int i = 0; i < nv; ++i) cfg.var_cardinalities.emplace_back("V" + std::to_string(i + 1), 2);
  for (int i = 0; i < nd; ++i) cfg.decision_cardinalities.emplace_back("D" + std::to_string(i + 1), 2);
  const ScanReport r = axiom_soundness_scan(cfg, rs);
  if (o.json) {
    Json j = r.to_json();
    j["rules"] = rule_set_name(rs.name);
    j["flags"] = flags_json(rs.flags);
    print_json(out, j);
  } else {
    out << rule_set_name(rs.name) << ": " << r.models << " models, " << r.instances
        << " rule instances, " << r.violations << " violations\n";
    if (r.first_violation) {
      const Json& v = *r.first_violation;
      out << "first violation: " << v["rule"].get<std::string>() << " at trial " << v["trial"] << ": ";
      for (const auto& p : v["premises"]) out << p.get<std::string>() << "; ";
      out << "=> " << v["conclusion"].get<std::string>() << "\n";
    }
  }
  return r.violations == 0 ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"ecicalc: conditional independence calculus"};
  app.require_subcommand(1);

  auto common_stmt = [&](CLI::App* c) {
    c->add_option("-u,--universe", o.universe_file, "declaration file");
    c->add_option("-p,--premise", o.premises, "premise statement (repeatable)");
    c->add_option("-d,--decision", o.decisions, "declare a decision variable (without -u)");
    c->add_option("--rules", o.rules, "SEPAROID_FULL, VCI_STRONG, ECI_RESTRICTED or GENERAL");
    c->add_option("--flag", o.flags, "side-condition flag (repeatable)");
    c->add_option("--max-steps", o.max_steps, "maximum derivation depth");
    c->add_option("--max-stmts", o.max_stmts, "maximum number of derived statements");
  };
  auto search_opts = [&](CLI::App* c) {
    c->add_option("--seed", o.seed);
    c->add_option("--trials", o.trials);
    c->add_option("--grid", o.grid, "atom masses drawn from 0..grid");
    c->add_option("--regimes", o.regimes);
    c->add_flag("--exhaustive", o.exhaustive);
  };
  app.add_flag("--json", o.json, "machine-readable output");

  auto* derive = app.add_subcommand("derive", "shortest derivation of a goal from the premises");
  derive->add_option("goal", o.goal)->required();
  common_stmt(derive);
  auto* close = app.add_subcommand("close", "closure of the premises");
  common_stmt(close);
  auto* check = app.add_subcommand("check", "evaluate a statement on a model file");
  check->add_option("model", o.model)->required();
  check->add_option("statement", o.statement)->required();
  check->add_option("--semantics", o.semantics, "SCI, VCI, ECI, PAIRWISE or GENERAL");
  auto* search = app.add_subcommand("search-cx", "random or exhaustive counterexample search");
  search->add_option("goal", o.goal)->required();
  common_stmt(search);
  search_opts(search);
  search->add_option("--semantics", o.semantics, "SCI, VCI or ECI");
  search->add_option("-o,--out", o.out_file, "write the counterexample here");
  auto* product = app.add_subcommand("product", "joint distribution on outcomes x regimes");
  product->add_option("model", o.model)->required();
  product->add_option("prior", o.prior, "'uniform' or comma-separated masses")->required();
  auto* acec = app.add_subcommand("ace", "average causal effect and its observational transfer");
  acec->add_option("model", o.model)->required();
  acec->add_option("--response", o.response);
  acec->add_option("--treatment", o.treatment);
  acec->add_option("--obs", o.labels.obs);
  acec->add_option("--do0", o.labels.do0);
  acec->add_option("--do1", o.labels.do1);
  auto* gf = app.add_subcommand("gformula", "expected utility of a strategy from observational kernels");
  gf->add_option("model", o.model)->required();
  gf->add_option("strategy", o.strategy)->required();
  gf->add_option("--k", o.k, "utility as label=value pairs (default: numeric labels)");
  gf->add_option("--obs", o.obs);
  auto* scan = app.add_subcommand("scan-axioms", "check rule soundness on generated models");
  scan->add_option("--rules", o.rules);
  scan->add_option("--flag", o.flags);
  scan->add_option("--vars", o.vars, "binary stochastic variables");
  scan->add_option("--decisions", o.decision_vars, "binary decision variables");
  search_opts(scan);

  for (auto* c : app.get_subcommands({})) c->add_flag("--json", o.json, "machine-readable output");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (derive->parsed()) return cmd_derive(o, out);
    if (close->parsed()) return cmd_close(o, out);
    if (check->parsed()) return cmd_check(o, out);
    if (search->parsed()) return cmd_search(o, out);
    if (product->parsed()) return cmd_product(o, out);
    if (acec->parsed()) return cmd_ace(o, out);
    if (gf->parsed()) return cmd_gformula(o, out);
    if (scan->parsed()) return cmd_scan(o, out);
  } catch (const Error& e) {
    err << "error " << static_cast<int>(e.code()) << " (" << error_code_name(e.code()) << "): " << e.what()
        << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace eci
