#pragma once

#include <stdexcept>
#include <string>

namespace dfrep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched operand dimensions, or a dimension above the dense-storage limits.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Extension and representation results only hold for dim != 2.
class DimensionExclusionError : public Error {
 public:
  explicit DimensionExclusionError(const std::string& where)
      : Error(where + ": theorems require dimension >= 3") {}
};

// Malformed or out-of-contract input; the message names the offending field.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Input is well formed but violates a decoherence-functional axiom or an
// operator condition.
class AxiomViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace dfrep
