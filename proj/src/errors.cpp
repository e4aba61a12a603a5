#include "perception/errors.hpp"

namespace perception {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidGrid: return "invalid-grid";
    case ErrorKind::kInvalidDistribution: return "invalid-distribution";
    case ErrorKind::kInvalidPgp: return "invalid-pgp";
    case ErrorKind::kKernel: return "kernel";
    case ErrorKind::kIcViolation: return "ic-violation";
    case ErrorKind::kDimension: return "dimension";
    case ErrorKind::kInvalidComparison: return "invalid-comparison";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kSizeLimit: return "size-limit";
    case ErrorKind::kSchema: return "schema";
  }
  return "unknown";
}

}  // namespace perception
