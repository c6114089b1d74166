#include "ptfprg/error.hpp"

namespace ptfprg {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input_size: return "input-size";
    case ErrorKind::position_overflow: return "position-overflow";
    case ErrorKind::precision: return "precision";
    case ErrorKind::domain: return "domain";
    case ErrorKind::coordinate: return "coordinate";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::infeasible_precision: return "infeasible-precision";
    case ErrorKind::degree: return "degree";
    case ErrorKind::capability: return "capability";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace ptfprg
