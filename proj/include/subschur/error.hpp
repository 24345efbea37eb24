#pragma once

#include <stdexcept>
#include <string>

namespace subschur {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that do not fit together (mismatched spaces, ragged matrices).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Inputs outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition on a numerical input was not met.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine gave up (iteration cap, stalled pivoting).
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace subschur
