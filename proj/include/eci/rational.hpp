#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace eci {

/// Exact rational number, always held in lowest terms with a positive
/// denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Accepts "n", "n/d" and finite decimals such as "0.25" or "-1.5".
Rational parse_rational(std::string_view text);

/// Serializes as "num/den" (the denominator is always written).
std::string to_string(const Rational& r);

double to_double(const Rational& r);

}  // namespace eci
