#include "eci/model_io.hpp"

#include "eci/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace eci {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::invalid_model, what); }

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string label_of(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_boolean()) return v.dump();
  bad("value labels must be strings or integers");
}

std::vector<Variable> variables_from(const Json& j) {
  if (!j.is_object()) bad("'variables' must be an object");
  std::vector<Variable> vars;
  for (const auto& [name, values] : j.items()) {
    if (!values.is_array() || values.empty()) bad("variable '" + name + "' needs a list of values");
    Variable v{name, {}};
    for (const auto& x : values) v.values.push_back(label_of(x));
    for (std::size_t i = 0; i < v.values.size(); ++i)
      for (std::size_t k = i + 1; k < v.values.size(); ++k)
        if (v.values[i] == v.values[k]) bad("variable '" + name + "' repeats a value");
    vars.push_back(std::move(v));
  }
  return vars;
}

DiscreteDistribution distribution_from(const std::vector<Variable>& vars, const Json& entries) {
  if (!entries.is_array()) bad("a distribution must be a list of entries");
  std::vector<Rational> pmf(atom_count(vars), Rational(0));
  std::vector<char> seen(pmf.size(), 0);
  for (const auto& e : entries) {
    const Json& assign = need(e, "assign");
    if (!assign.is_object() || assign.size() != vars.size())
      bad("each entry must assign every variable exactly once");
    std::size_t atom = 0;
    for (const auto& v : vars) {
      if (!assign.contains(v.name)) bad("entry does not assign '" + v.name + "'");
      const int idx = v.value_index(label_of(assign.at(v.name)));
      if (idx < 0) bad("unknown value for '" + v.name + "'");
      atom = atom * static_cast<std::size_t>(v.cardinality()) + static_cast<std::size_t>(idx);
    }
    if (seen[atom]) bad("atom listed twice");
    seen[atom] = 1;
    pmf[atom] = rational_from_json(need(e, "p"));
  }
  return DiscreteDistribution(vars, std::move(pmf));
}

Json entries_of(const DiscreteDistribution& d) {
  Json out = Json::array();
  for (std::size_t a = 0; a < d.atom_count(); ++a) {
    if (d.p(a) == 0) continue;
    Json assign = Json::object();
    for (int v = 0; v < d.variable_count(); ++v)
      assign[d.variables()[v].name] = d.variables()[v].values[d.value(a, v)];
    out.push_back({{"assign", assign}, {"p", to_string(d.p(a))}});
  }
  return out;
}

Json variables_json(const std::vector<Variable>& vars) {
  Json out = Json::object();
  for (const auto& v : vars) out[v.name] = v.values;
  return out;
}

}  // namespace

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number()) return parse_rational(j.dump());
  bad("probabilities must be rational strings or numbers");
}

Model single_model(const DiscreteDistribution& d) {
  return {RegimeFamily({"default"}, {d}, {}), true};
}

Model model_from_json(const Json& j) {
  try {
    const auto vars = variables_from(need(j, "variables"));
    if (!j.contains("regimes")) {
      Model m = single_model(distribution_from(vars, need(j, "distribution")));
      if (j.contains("info_base")) bad("info bases need a regime family");
      return m;
    }
    std::vector<std::string> regimes;
    for (const auto& r : need(j, "regimes")) regimes.push_back(label_of(r));
    const Json& dists = need(j, "distributions");
    std::vector<DiscreteDistribution> ds;
    for (const auto& r : regimes) {
      if (!dists.contains(r)) bad("no distribution for regime '" + r + "'");
      ds.push_back(distribution_from(vars, dists.at(r)));
    }
    if (dists.size() != regimes.size()) bad("distributions given for undeclared regimes");

    std::vector<DecisionVar> decs;
    if (j.contains("decision_vars")) {
      const Json* explicit_labels = j.contains("decision_values") ? &j.at("decision_values") : nullptr;
      for (const auto& [name, table] : j.at("decision_vars").items()) {
        DecisionVar d{name, {}, {}};
        if (explicit_labels && explicit_labels->contains(name))
          for (const auto& x : explicit_labels->at(name)) d.labels.push_back(label_of(x));
        for (const auto& r : regimes) {
          if (!table.contains(r)) bad("decision variable '" + name + "' has no value at '" + r + "'");
          const std::string lab = label_of(table.at(r));
          auto it = std::find(d.labels.begin(), d.labels.end(), lab);
          if (it == d.labels.end()) {
            if (explicit_labels && explicit_labels->contains(name))
              bad("decision variable '" + name + "' takes an undeclared value");
            d.labels.push_back(lab);
            it = d.labels.end() - 1;
          }
          d.value.push_back(static_cast<int>(it - d.labels.begin()));
        }
        decs.push_back(std::move(d));
      }
    }
    Model m{RegimeFamily(std::move(regimes), std::move(ds), std::move(decs)), false};
    if (j.contains("info_base")) {
      const Json& ib = j.at("info_base");
      InfoBase base;
      for (const auto& g : need(ib, "observables")) base.observables.push_back(g.get<std::vector<std::string>>());
      for (const auto& a : need(ib, "actions")) base.actions.push_back(a.get<std::string>());
      if (ib.contains("unmeasured"))
        for (const auto& g : ib.at("unmeasured")) base.unmeasured.push_back(g.get<std::vector<std::string>>());
      m.family.set_info_base(std::move(base));
    }
    return m;
  } catch (const Json::exception& e) {
    bad(std::string("malformed model: ") + e.what());
  }
}

Json distribution_to_json(const DiscreteDistribution& d) {
  Json j = Json::object();
  j["variables"] = variables_json(d.variables());
  j["distribution"] = entries_of(d);
  return j;
}

Json family_to_json(const RegimeFamily& fam) {
  Json j = Json::object();
  j["regimes"] = fam.regimes();
  Json decs = Json::object();
  Json labels = Json::object();
  for (const auto& d : fam.decisions()) {
    Json t = Json::object();
    for (int r = 0; r < fam.regime_count(); ++r)
      t[fam.regimes()[r]] = d.labels[d.value[r]];
    decs[d.name] = t;
    labels[d.name] = d.labels;
  }
  j["decision_vars"] = decs;
  j["decision_values"] = labels;
  j["variables"] = variables_json(fam.variables());
  Json dists = Json::object();
  for (int r = 0; r < fam.regime_count(); ++r) dists[fam.regimes()[r]] = entries_of(fam.dist(r));
  j["distributions"] = dists;
  if (fam.info_base()) {
    const auto& ib = *fam.info_base();
    j["info_base"] = {{"observables", ib.observables}, {"actions", ib.actions}, {"unmeasured", ib.unmeasured}};
  }
  return j;
}

Json model_to_json(const Model& m) {
  return m.single ? distribution_to_json(m.family.dist(0)) : family_to_json(m.family);
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_argument, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::invalid_model, "'" + path + "' is not valid JSON: " + e.what());
  }
}

Model load_model(const std::string& path) { return model_from_json(load_json(path)); }

void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace eci
