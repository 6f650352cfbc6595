#include "stablecond/errors.hpp"

namespace stablecond {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::OneSidedJumps: return "OneSidedJumps";
    case ErrorKind::CauchyAsymmetric: return "CauchyAsymmetric";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ScopeError: return "ScopeError";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::NearDiagonal: return "NearDiagonal";
    case ErrorKind::GridFailure: return "GridFailure";
    case ErrorKind::KilledPath: return "KilledPath";
    case ErrorKind::InsufficientAcceptance: return "InsufficientAcceptance";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace stablecond
