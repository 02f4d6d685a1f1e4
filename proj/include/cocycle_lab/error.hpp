#pragma once

#include <stdexcept>
#include <string>

namespace cocycle_lab {

enum class ErrorKind {
  invalid_parameter,
  resource_limit,
  validation,
  degenerate_action,
  not_applicable,
  numerical_inconsistency,
  domain,
  unsupported_range,
  symbol_evaluation,
  io,
  usage,
};

const char* to_string(ErrorKind kind) noexcept;

// Every failure surfaced by the library carries one of the kinds above so the
// CLI can map it to an exit status and callers can branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cocycle_lab
