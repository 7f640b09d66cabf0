#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eci {

/// Stable error codes. The numeric values are part of the CLI contract
/// (reported in `--json` output) and must not be reordered.
enum class ErrorCode {
  unknown_variable = 10,
  duplicate_variable = 11,
  kind_mismatch = 12,
  parse_error = 20,
  ill_formed = 21,
  guard_violation = 30,
  zero_conditioning_event = 40,
  empty_context = 41,
  not_complementary = 42,
  malformed_statement = 43,
  invalid_prior = 44,
  invalid_model = 45,
  semantics_mismatch = 50,
  reduction_missing = 60,
  not_intervention = 61,
  stability_violated = 62,
  positivity_violated = 63,
  invalid_argument = 90,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the statement / declaration parser; carries the byte offset
/// into the input at which parsing failed.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error(ErrorCode::parse_error,
              "parse error at byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace eci
