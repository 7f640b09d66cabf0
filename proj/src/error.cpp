#include "eci/error.hpp"

namespace eci {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::unknown_variable: return "UnknownVariable";
    case ErrorCode::duplicate_variable: return "DuplicateVariable";
    case ErrorCode::kind_mismatch: return "KindMismatch";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::ill_formed: return "IllFormed";
    case ErrorCode::guard_violation: return "GuardViolation";
    case ErrorCode::zero_conditioning_event: return "ZeroConditioningEvent";
    case ErrorCode::empty_context: return "EmptyContext";
    case ErrorCode::not_complementary: return "NotComplementary";
    case ErrorCode::malformed_statement: return "MalformedStatement";
    case ErrorCode::invalid_prior: return "InvalidPrior";
    case ErrorCode::invalid_model: return "InvalidModel";
    case ErrorCode::semantics_mismatch: return "SemanticsMismatch";
    case ErrorCode::reduction_missing: return "ReductionMissing";
    case ErrorCode::not_intervention: return "NotIntervention";
    case ErrorCode::stability_violated: return "StabilityViolated";
    case ErrorCode::positivity_violated: return "PositivityViolated";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace eci
