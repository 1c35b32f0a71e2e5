#pragma once

#include <stdexcept>
#include <string>

namespace crackwave {

enum class ErrorKind {
  invalid_argument,
  domain,       // evaluation at a point where a formula is singular
  validation,   // geometry / mesh contract violated
  parse,        // malformed input file
  precision,    // observation point too close to a surface
  numerical,    // factorization failure, non-convergence, ill-posed fit
  io,
  internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace crackwave
