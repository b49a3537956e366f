#pragma once

#include <stdexcept>
#include <string>

namespace xyness {

// Raised where a quantity is mathematically undefined, e.g. division by a
// zero of mu at critical parameters.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when a numerical stage cannot deliver its contract (quadrature
// budget exhausted, consistency gate violated, non-finite input).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace xyness
