#pragma once

#include <stdexcept>
#include <string>

namespace ptfprg {

enum class ErrorKind {
  input_size,          // seed or vector of the wrong length
  position_overflow,   // index does not fit in the field
  precision,           // M > w
  domain,              // argument outside a function's domain
  coordinate,          // j >= n
  parameter,           // invalid or too-coarse parameters
  infeasible_precision,
  degree,              // polynomial degree above a cap or a configured bound
  capability,          // exact path not available at this size
  configuration,
  parse,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace ptfprg
