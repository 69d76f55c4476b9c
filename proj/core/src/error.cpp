#include "evt/error.hpp"

namespace evt {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidEventSet: return "InvalidEventSet";
    case Errc::kTooManyEvents: return "TooManyEvents";
    case Errc::kWrongLength: return "WrongLength";
    case Errc::kNonFinite: return "NonFinite";
    case Errc::kNegativeProbability: return "NegativeProbability";
    case Errc::kNotNormalized: return "NotNormalized";
    case Errc::kNegativeValue: return "NegativeValue";
    case Errc::kEventSetMismatch: return "EventSetMismatch";
    case Errc::kEmptySetExcluded: return "EmptySetExcluded";
    case Errc::kNegativeRate: return "NegativeRate";
    case Errc::kTargetOutOfRange: return "TargetOutOfRange";
    case Errc::kDegenerateMismatch: return "DegenerateMismatch";
    case Errc::kZeroAlpha: return "ZeroAlpha";
    case Errc::kOutOfSupport: return "OutOfSupport";
    case Errc::kEmptyBatch: return "EmptyBatch";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kDuplicateMask: return "DuplicateMask";
    case Errc::kMissingMask: return "MissingMask";
    case Errc::kBadBitstring: return "BadBitstring";
    case Errc::kSyntax: return "Syntax";
    case Errc::kDidNotConverge: return "DidNotConverge";
    case Errc::kResampleBudgetExhausted: return "ResampleBudgetExhausted";
  }
  return "Unknown";
}

bool is_numeric_failure(Errc code) {
  return code == Errc::kDidNotConverge || code == Errc::kResampleBudgetExhausted;
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

ParseError::ParseError(Errc code, std::size_t line, std::size_t column, const std::string& detail)
    : Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                      detail),
      line_(line),
      column_(column) {}

}  // namespace evt
