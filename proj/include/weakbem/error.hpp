#pragma once

#include <stdexcept>
#include <string>

namespace weakbem {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration (unsupported order, malformed config file, ...).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Request exceeds a hard resource guard.
class CapacityError : public Error {
public:
  using Error::Error;
};

/// A precondition of an operation was violated by the caller.
class ContractError : public Error {
public:
  using Error::Error;
};

/// Kernel evaluated at a singular point.
class SingularityError : public Error {
public:
  using Error::Error;
};

/// Non-finite value produced while assembling a Galerkin matrix.
class AssemblyError : public Error {
public:
  AssemblyError(const std::string& what, std::size_t test_triangle, std::size_t trial_triangle)
      : Error(what + " (test triangle " + std::to_string(test_triangle) + ", trial triangle " +
              std::to_string(trial_triangle) + ")"),
        test_triangle_(test_triangle),
        trial_triangle_(trial_triangle) {}

  std::size_t test_triangle() const noexcept { return test_triangle_; }
  std::size_t trial_triangle() const noexcept { return trial_triangle_; }

private:
  std::size_t test_triangle_;
  std::size_t trial_triangle_;
};

/// Penalty parameter outside the range where the formulation is well posed.
class HypothesisError : public Error {
public:
  using Error::Error;
};

/// Sparse factorization failed (matrix not symmetric positive definite).
class FactorizationError : public Error {
public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace weakbem
