#pragma once

#include <stdexcept>
#include <string>

namespace freepoints {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector lengths do not match the ambient dimension of the object.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A precondition on the arguments does not hold (non-primitive vector,
// parameter out of range, dependent basis, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// ∇f vanishes at a non-zero point: the cone over the hypersurface is singular
// there and the form is not accepted as smooth.
class SingularPoint : public Error {
 public:
  using Error::Error;
};

// A node or instance-size cap was hit.  The computation did not produce an
// answer; nothing partial is returned through this path.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A contract checked at run time failed (for example a majorant that does not
// dominate).  Carries the offending record in its message.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Integer arithmetic left the representable range.
class Overflow : public Error {
 public:
  using Error::Error;
};

}  // namespace freepoints
