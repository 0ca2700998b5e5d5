#pragma once

#include <stdexcept>
#include <string>

namespace oaminlp {

/// Base class for all solver errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Vector/matrix sizes do not match the owning problem.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A problem object violates a structural invariant (empty term list,
/// crossed bounds, infinite integer box, ...).
class InvalidProblem : public Error {
 public:
  using Error::Error;
};

/// Subgradient weights are not a convex combination supported on active
/// pieces.
class WeightError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown inside a solver (tiny pivot, dual corruption,
/// iteration limit).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Misuse of the cut pool (duplicate discrete assignment, ...).
class PoolError : public Error {
 public:
  using Error::Error;
};

}  // namespace oaminlp
