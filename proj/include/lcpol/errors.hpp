#pragma once

#include <stdexcept>
#include <string>

namespace lcpol {

// Input violates a documented precondition. CLI exit code 2.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical budget (tolerance, residual, convergence) was exceeded. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError(msg);
}

}  // namespace lcpol
