#include "cocycle_lab/error.hpp"

namespace cocycle_lab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::resource_limit: return "resource-limit";
    case ErrorKind::validation: return "validation";
    case ErrorKind::degenerate_action: return "degenerate-action";
    case ErrorKind::not_applicable: return "not-applicable";
    case ErrorKind::numerical_inconsistency: return "numerical-inconsistency";
    case ErrorKind::domain: return "domain";
    case ErrorKind::unsupported_range: return "unsupported-range";
    case ErrorKind::symbol_evaluation: return "symbol-evaluation";
    case ErrorKind::io: return "io";
    case ErrorKind::usage: return "usage";
  }
  return "unknown";
}

}  // namespace cocycle_lab
