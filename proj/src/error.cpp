#include "infoperc/error.hpp"

namespace infoperc {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidGraph: return "invalid-graph";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::BudgetExceeded: return "budget-exceeded";
    case ErrorKind::Supercritical: return "supercritical";
    case ErrorKind::Integrity: return "integrity";
    case ErrorKind::InvalidConfig: return "invalid-config";
  }
  return "unknown";
}

}  // namespace infoperc
