#include "eci/rational.hpp"

#include "eci/error.hpp"

#include <cctype>

namespace eci {

namespace {

BigInt parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw Error(ErrorCode::invalid_argument, "bad rational '" + std::string(whole) + "'");
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw Error(ErrorCode::invalid_argument, "bad rational '" + std::string(whole) + "'");
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw Error(ErrorCode::invalid_argument, "bad rational '" + std::string(whole) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-v) : v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(trim(s.substr(0, slash)), s);
    BigInt den = parse_integer(trim(s.substr(slash + 1)), s);
    if (den == 0) throw Error(ErrorCode::invalid_argument, "zero denominator in '" + std::string(s) + "'");
    return Rational(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    bool neg = !int_part.empty() && int_part[0] == '-';
    if (int_part.empty() || int_part == "-" || int_part == "+") int_part = "0";
    BigInt whole = parse_integer(int_part, s);
    if (whole < 0) whole = -whole;
    BigInt scale = 1;
    BigInt frac_v = 0;
    for (char c : frac) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw Error(ErrorCode::invalid_argument, "bad rational '" + std::string(s) + "'");
      frac_v = frac_v * 10 + (c - '0');
      scale *= 10;
    }
    Rational r = Rational(whole) + Rational(frac_v, scale);
    return neg ? Rational(-r) : r;
  }
  return Rational(parse_integer(s, s));
}

std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace eci
