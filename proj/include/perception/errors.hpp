#pragma once

#include <stdexcept>
#include <string>

namespace perception {

enum class ErrorKind {
  kInvalidGrid,
  kInvalidDistribution,
  kInvalidPgp,
  kKernel,
  kIcViolation,
  kDimension,
  kInvalidComparison,
  kInfeasible,
  kSizeLimit,
  kSchema,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library. The CLI maps kind to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when an attention target cannot be met by any monotone rule, or a
// requested coupling does not exist. The range is empty in the latter case.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double lo, double hi)
      : Error(ErrorKind::kInfeasible, what), lo_(lo), hi_(hi) {}
  double achievable_lo() const { return lo_; }
  double achievable_hi() const { return hi_; }

 private:
  double lo_, hi_;
};

}  // namespace perception
