#include "eci/dsl.hpp"

#include "eci/error.hpp"

#include <cctype>

namespace eci {

namespace {

constexpr std::string_view kIndep = "_||_";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Cursor {
 public:
  Cursor(std::string_view text, std::size_t base = 0) : text_(text), base_(base) {}

  void skip_ws() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }
  bool at(std::string_view tok) {
    skip_ws();
    return text_.substr(pos_, tok.size()) == tok;
  }
  bool eat(std::string_view tok) {
    if (!at(tok)) return false;
    pos_ += tok.size();
    return true;
  }
  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }
  bool at_ident() {
    skip_ws();
    return pos_ < text_.size() && ident_start(text_[pos_]) && !at(kIndep);
  }
  std::string ident() {
    if (!at_ident()) fail("expected a variable name");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) {
      if (pos_ > start && text_.substr(pos_, kIndep.size()) == kIndep) break;
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }
  std::vector<std::string> ident_list() {
    std::vector<std::string> out{ident()};
    while (eat(",")) out.push_back(ident());
    return out;
  }
  /// Text up to (not including) the next `c`; the cursor is left on `c`.
  std::string_view until(char c) {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != c) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::size_t offset() const { return base_ + pos_; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(offset(), what); }

 private:
  std::string_view text_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

RawStatement parse_raw_at(std::string_view text, std::size_t base) {
  Cursor c(text, base);
  RawStatement raw;
  raw.left = c.ident_list();
  c.expect(kIndep);
  raw.right = c.ident_list();
  if (c.eat("|")) {
    if (c.eat("0")) {
      // explicit empty conditioning set
    } else if (c.at_ident()) {
      raw.cond = c.ident_list();
    } else {
      c.fail("expected a conditioning set or 0 after '|'");
    }
  }
  if (!c.done()) c.fail("unexpected trailing input");
  return raw;
}

}  // namespace

RawStatement parse_raw_statement(std::string_view text) { return parse_raw_at(text, 0); }

CIStatement parse_statement(const Universe& u, std::string_view text) {
  return canonicalize(u, parse_raw_statement(text));
}

CIStatement parse_statement(const Universe& u, std::string_view text,
                            const ComplementarityDecl& comp) {
  CIStatement s = parse_statement(u, text);
  if (!well_formed(s, comp))
    throw Error(ErrorCode::ill_formed,
                "'" + std::string(text) + "' violates the complementarity condition");
  return s;
}

Declarations parse_declarations(std::string_view text) {
  Declarations d;
  Cursor c(text);
  struct Pending {
    RawStatement raw;
  };
  std::vector<Pending> premises;
  while (!c.done()) {
    if (c.eat("stochastic")) {
      for (const auto& n : c.ident_list()) d.universe.declare(n, VarKind::stochastic);
    } else if (c.eat("decision")) {
      for (const auto& n : c.ident_list()) d.universe.declare(n, VarKind::decision);
    } else if (c.eat("complementary")) {
      const bool braced = c.eat("{");
      const VarSet fam = resolve(d.universe, c.ident_list());
      if (braced) c.expect("}");
      if (fam.stoch != 0)
        throw Error(ErrorCode::kind_mismatch, "complementary families contain decision variables only");
      d.complements.add(fam.dec);
    } else if (c.eat("reduce")) {
      const std::string w = c.ident();
      c.expect("<=");
      const std::string y = c.ident();
      d.reductions.add(d.universe, w, y);
    } else if (c.eat("premise")) {
      const std::size_t start = c.offset();
      const std::string_view body = c.until(';');
      premises.push_back({parse_raw_at(body, start)});
    } else {
      c.fail("expected a declaration");
    }
    c.expect(";");
  }
  for (const auto& p : premises) {
    CIStatement s = canonicalize(d.universe, p.raw);
    d.premises.push_back(s);
  }
  return d;
}

Universe universe_from_statements(const std::vector<std::string>& statements) {
  Universe u;
  for (const auto& text : statements) {
    const RawStatement raw = parse_raw_statement(text);
    for (const auto* slot : {&raw.left, &raw.right, &raw.cond})
      for (const auto& n : *slot)
        if (!u.contains(n)) u.declare(n, VarKind::stochastic);
  }
  return u;
}

}  // namespace eci
