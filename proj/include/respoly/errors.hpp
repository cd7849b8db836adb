#pragma once

#include <stdexcept>
#include <string>

namespace respoly {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed caller input: bad interval data, x0 on the set, invalid degree.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

/// A numeric procedure exhausted its budget (quadrature, root isolation,
/// simplex pivoting, singular linear system after retries).
class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what) : Error(what) {}
};

/// A structural postcondition that theory guarantees failed to hold
/// numerically (wrong root count, bad alternation pattern, bound violation).
class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what) : Error(what) {}
};

}  // namespace respoly
