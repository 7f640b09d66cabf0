#pragma once

// Text syntax for statements and declaration files.
//
//   X, Z _||_ Y | Z          statement; "| 0" or no bar means empty conditioning
//
//   stochastic X, Y, Z;      declaration file
//   decision Theta, Phi;
//   complementary {Theta, Phi};
//   reduce W <= Y;
//   premise X _||_ Y | Z;
//   # comment to end of line

#include "eci/lattice.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace eci {

/// Syntax only; names are not resolved. Throws ParseError with the byte
/// offset of the problem.
RawStatement parse_raw_statement(std::string_view text);

/// Parses and resolves against `u` (UnknownVariable for undeclared names).
CIStatement parse_statement(const Universe& u, std::string_view text);

/// As above, and additionally rejects statements that are not well formed
/// under `comp` (IllFormed).
CIStatement parse_statement(const Universe& u, std::string_view text,
                            const ComplementarityDecl& comp);

struct Declarations {
  Universe universe;
  ReductionRegistry reductions;
  ComplementarityDecl complements;
  std::vector<CIStatement> premises;
};

/// Throws ParseError, DuplicateVariable, UnknownVariable, KindMismatch.
Declarations parse_declarations(std::string_view text);

/// Declares every name occurring in the statements as a stochastic variable,
/// in order of first appearance.
Universe universe_from_statements(const std::vector<std::string>& statements);

}  // namespace eci
