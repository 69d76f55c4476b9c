#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace evt {

enum class Errc {
  kInvalidEventSet,
  kTooManyEvents,
  kWrongLength,
  kNonFinite,
  kNegativeProbability,
  kNotNormalized,
  kNegativeValue,
  kEventSetMismatch,
  kEmptySetExcluded,
  kNegativeRate,
  kTargetOutOfRange,
  kDegenerateMismatch,
  kZeroAlpha,
  kOutOfSupport,
  kEmptyBatch,
  kInvalidArgument,
  kDuplicateMask,
  kMissingMask,
  kBadBitstring,
  kSyntax,
  // Numeric failures: the inputs were valid but the computation did not
  // meet its contract.
  kDidNotConverge,
  kResampleBudgetExhausted,
};

std::string_view errc_name(Errc code);

// True for errors that signal a numeric failure rather than bad input.
bool is_numeric_failure(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// A format error positioned at a 1-based (line, column) in the source text.
class ParseError : public Error {
 public:
  ParseError(Errc code, std::size_t line, std::size_t column, const std::string& detail);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace evt
