#include "eci/deduction.hpp"

#include "eci/dsl.hpp"
#include "eci/error.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace eci {

std::size_t Derivation::rule_applications() const {
  std::size_t n = is_premise() ? 0 : 1;
  for (const auto& c : children) n += c.rule_applications();
  return n;
}

std::size_t Derivation::depth() const {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth());
  return is_premise() ? 0 : d + 1;
}

namespace {

constexpr int kPremiseRank = -1;

struct Node {
  CIStatement stmt;
  int rank = kPremiseRank;  // rank of the rule in the set, kPremiseRank for premises
  RuleId rule = RuleId::P1;
  std::optional<Flag> license;
  std::vector<int> premises;  // node ids
  std::size_t cost = 0;
  std::size_t depth = 0;
};

struct Candidate {
  std::size_t cost;
  int rank;
  CIStatement stmt;
  std::vector<int> premises;
  RuleId rule;
  std::optional<Flag> license;
  std::size_t depth;

  // Min-heap order: smaller tree, then earlier rule, then statement order,
  // then earlier premises.
  bool operator>(const Candidate& o) const {
    if (cost != o.cost) return cost > o.cost;
    if (rank != o.rank) return rank > o.rank;
    if (stmt != o.stmt) return stmt > o.stmt;
    return premises > o.premises;
  }
};

class Search {
 public:
  Search(const RuleContext& ctx, const Limits& limits) : ctx_(ctx), limits_(limits) {}

  /// Runs until `goal` is finalized (if given) or the queue drains. Returns
  /// the goal's node id or -1.
  int run(const std::vector<CIStatement>& premises, const std::optional<CIStatement>& goal) {
    for (const auto& p : premises)
      if (!admissible(ctx_.rules, p, ctx_.complements))
        throw Error(ErrorCode::ill_formed, "premise '" + render(ctx_.universe, p) +
                                               "' is outside the language of " +
                                               std::string(rule_set_name(ctx_.rules.name)));
    std::vector<CIStatement> sorted = premises;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (const auto& p : sorted) push({0, kPremiseRank, p, {}, RuleId::P1, std::nullopt, 0});

    for (RuleId r : ctx_.rules.rules) {
      if (rule_arity(r) != 0) continue;
      fire_axioms(r, ctx_, make_emit(r));
    }

    while (!queue_.empty()) {
      Candidate c = queue_.top();
      queue_.pop();
      if (ids_.count(c.stmt)) continue;
      if (nodes_.size() >= limits_.max_statements) {
        truncated_ = true;
        break;
      }
      const int id = finalize(std::move(c));
      if (goal && nodes_[id].stmt == *goal) return id;
      expand(id);
    }
    return -1;
  }

  bool truncated() const { return truncated_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  Derivation build(int id) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    Derivation d;
    d.statement = n.stmt;
    if (n.rank != kPremiseRank) {
      d.rule = std::string(rule_name(n.rule));
      d.license = n.license;
    }
    for (int p : n.premises) d.children.push_back(build(p));
    return d;
  }

 private:
  Emit make_emit(RuleId r) {
    const int rank = ctx_.rules.rank(r);
    return [this, r, rank](const CIStatement& c, std::span<const CIStatement> ps,
                           std::optional<Flag> license) {
      if (ids_.count(c)) return;
      std::size_t cost = 1;
      std::size_t depth = 1;
      std::vector<int> pids;
      pids.reserve(ps.size());
      for (const auto& p : ps) {
        const int pid = ids_.at(p);
        pids.push_back(pid);
        cost += nodes_[pid].cost;
        depth = std::max(depth, nodes_[pid].depth + 1);
      }
      if (depth > limits_.max_depth) {
        truncated_ = true;
        return;
      }
      push({cost, rank, c, std::move(pids), r, license, depth});
    };
  }

  void push(Candidate c) {
    auto it = best_.find(c.stmt);
    const auto key = std::make_pair(c.cost, c.rank);
    if (it != best_.end() && it->second <= key) return;
    best_[c.stmt] = key;
    queue_.push(std::move(c));
  }

  int finalize(Candidate c) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({c.stmt, c.rank, c.rule, c.license, std::move(c.premises), c.cost, c.depth});
    ids_.emplace(c.stmt, id);
    index_.insert(c.stmt);
    return id;
  }

  void expand(int id) {
    const CIStatement s = nodes_[static_cast<std::size_t>(id)].stmt;
    for (RuleId r : ctx_.rules.rules) {
      const int arity = rule_arity(r);
      if (arity == 1)
        fire_unary(r, s, ctx_, make_emit(r));
      else if (arity == 2)
        fire_binary(r, s, index_, ctx_, make_emit(r), true, true);
    }
  }

  const RuleContext& ctx_;
  const Limits& limits_;
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> queue_;
  std::unordered_map<CIStatement, std::pair<std::size_t, int>, CIStatementHash> best_;
  std::unordered_map<CIStatement, int, CIStatementHash> ids_;
  std::vector<Node> nodes_;
  StatementIndex index_;
  bool truncated_ = false;
};

}  // namespace

ClosureResult closure(const std::vector<CIStatement>& premises, const RuleContext& ctx,
                      const Limits& limits) {
  Search search(ctx, limits);
  search.run(premises, std::nullopt);
  ClosureResult out;
  out.truncated = search.truncated();
  for (const auto& n : search.nodes()) out.statements.push_back(n.stmt);
  std::sort(out.statements.begin(), out.statements.end());
  return out;
}

ProofResult prove(const CIStatement& goal, const std::vector<CIStatement>& premises,
                  const RuleContext& ctx, const Limits& limits) {
  if (!admissible(ctx.rules, goal, ctx.complements))
    throw Error(ErrorCode::ill_formed, "goal '" + render(ctx.universe, goal) +
                                           "' is outside the language of " +
                                           std::string(rule_set_name(ctx.rules.name)));
  Search search(ctx, limits);
  const int id = search.run(premises, goal);
  ProofResult out;
  if (id >= 0)
    out.derivation = search.build(id);
  else
    out.truncated = search.truncated();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

int number_lines(const Universe& u, const Derivation& d, std::map<CIStatement, int>& seen,
                 std::ostringstream& os) {
  if (auto it = seen.find(d.statement); it != seen.end()) return it->second;
  std::vector<int> from;
  for (const auto& c : d.children) from.push_back(number_lines(u, c, seen, os));
  const int n = static_cast<int>(seen.size()) + 1;
  seen.emplace(d.statement, n);
  os << n << ". " << render(u, d.statement) << " [";
  if (d.is_premise()) {
    os << "premise";
  } else {
    os << d.rule;
    for (std::size_t i = 0; i < from.size(); ++i) os << (i == 0 ? " from " : ", ") << from[i];
    if (d.license) os << "; licensed by " << flag_name(*d.license);
  }
  os << "]\n";
  return n;
}

bool replay_impl(const Derivation& d, const std::vector<CIStatement>& premises,
                 const RuleContext& ctx, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = render(ctx.universe, d.statement) + ": " + msg;
    return false;
  };
  if (d.is_premise()) {
    if (std::find(premises.begin(), premises.end(), d.statement) == premises.end())
      return fail("not a premise");
    return true;
  }
  auto rule = rule_from_name(d.rule);
  if (!rule) return fail("unknown rule " + d.rule);
  if (!ctx.rules.contains(*rule))
    return fail("rule " + d.rule + " is not in " + std::string(rule_set_name(ctx.rules.name)));
  if (static_cast<int>(d.children.size()) != rule_arity(*rule))
    return fail("rule " + d.rule + " takes " + std::to_string(rule_arity(*rule)) + " premises");
  if (*rule == RuleId::P4m || *rule == RuleId::P4g) {
    if (!d.license) return fail("rule " + d.rule + " needs a licensing flag");
    if (!ctx.rules.flags.has(*d.license))
      return fail("flag " + std::string(flag_name(*d.license)) + " is not set");
  }
  for (const auto& c : d.children)
    if (!replay_impl(c, premises, ctx, why)) return false;
  std::vector<CIStatement> ps;
  for (const auto& c : d.children) ps.push_back(c.statement);
  const auto concl = conclusions_of(*rule, ps, ctx);
  if (!std::binary_search(concl.begin(), concl.end(), d.statement))
    return fail("does not follow by " + d.rule);
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, std::size_t offset) {
  s = trim(s);
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw ParseError(offset, "expected a line number");
  return v;
}

}  // namespace

std::string format_proof(const Universe& u, const Derivation& d) {
  std::map<CIStatement, int> seen;
  std::ostringstream os;
  number_lines(u, d, seen, os);
  return os.str();
}

bool replay(const Derivation& d, const std::vector<CIStatement>& premises, const RuleContext& ctx,
            std::string* why) {
  return replay_impl(d, premises, ctx, why);
}

Derivation parse_proof(const Universe& u, std::string_view text) {
  std::map<int, Derivation> lines;
  int last = -1;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(offset, end - offset);
    const std::size_t base = offset;
    offset = end + 1;
    if (trim(line).empty()) continue;

    const std::size_t dot = line.find('.');
    const std::size_t open = line.rfind('[');
    const std::size_t close = line.rfind(']');
    if (dot == std::string_view::npos || open == std::string_view::npos ||
        close == std::string_view::npos || open < dot || close < open)
      throw ParseError(base, "expected 'n. statement [justification]'");
    const int n = parse_int(line.substr(0, dot), base);

    Derivation d;
    try {
      d.statement = parse_statement(u, trim(line.substr(dot + 1, open - dot - 1)));
    } catch (const ParseError& e) {
      throw ParseError(base + dot + 1 + e.offset(), e.what());
    }

    std::string_view just = trim(line.substr(open + 1, close - open - 1));
    if (just != "premise") {
      std::string_view license;
      if (auto semi = just.find(';'); semi != std::string_view::npos) {
        license = trim(just.substr(semi + 1));
        just = trim(just.substr(0, semi));
        constexpr std::string_view kBy = "licensed by ";
        if (license.substr(0, kBy.size()) != kBy)
          throw ParseError(base + open, "expected 'licensed by <flag>'");
        auto f = flag_from_name(trim(license.substr(kBy.size())));
        if (!f) throw ParseError(base + open, "unknown flag");
        d.license = *f;
      }
      std::string_view from;
      if (auto fp = just.find(" from "); fp != std::string_view::npos) {
        from = just.substr(fp + 6);
        just = trim(just.substr(0, fp));
      }
      if (!rule_from_name(just)) throw ParseError(base + open, "unknown rule '" + std::string(just) + "'");
      d.rule = std::string(just);
      while (!trim(from).empty()) {
        const std::size_t comma = from.find(',');
        const int ref = parse_int(from.substr(0, comma), base + open);
        auto it = lines.find(ref);
        if (it == lines.end()) throw ParseError(base + open, "reference to unknown line " + std::to_string(ref));
        d.children.push_back(it->second);
        if (comma == std::string_view::npos) break;
        from = from.substr(comma + 1);
      }
    }
    if (!lines.emplace(n, std::move(d)).second)
      throw ParseError(base, "duplicate line number " + std::to_string(n));
    last = n;
  }
  if (last < 0) throw ParseError(0, "empty proof");
  return lines.at(last);
}

Json derivation_to_json(const Universe& u, const Derivation& d) {
  Json j;
  j["goal"] = render(u, d.statement);
  j["rule"] = d.is_premise() ? std::string("premise") : d.rule;
  if (d.license) j["license"] = std::string(flag_name(*d.license));
  j["children"] = Json::array();
  for (const auto& c : d.children) j["children"].push_back(derivation_to_json(u, c));
  return j;
}

Derivation derivation_from_json(const Universe& u, const Json& j) {
  Derivation d;
  d.statement = parse_statement(u, j.at("goal").get<std::string>());
  const auto rule = j.at("rule").get<std::string>();
  if (rule != "premise") d.rule = rule;
  if (j.contains("license")) {
    auto f = flag_from_name(j.at("license").get<std::string>());
    if (!f) throw Error(ErrorCode::invalid_argument, "unknown flag in derivation");
    d.license = *f;
  }
  for (const auto& c : j.value("children", Json::array()))
    d.children.push_back(derivation_from_json(u, c));
  return d;
}

}  // namespace eci
