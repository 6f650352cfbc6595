#pragma once

#include <stdexcept>
#include <string>

namespace stablecond {

enum class ErrorKind {
  OutOfRange,
  OneSidedJumps,
  CauchyAsymmetric,
  DomainError,
  ScopeError,
  QuadratureFailure,
  NearDiagonal,
  GridFailure,
  KilledPath,
  InsufficientAcceptance,
  ConfigError,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so
// callers (and tests) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

}  // namespace stablecond
