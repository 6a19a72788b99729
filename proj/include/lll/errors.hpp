#pragma once

#include <stdexcept>
#include <string>

namespace lll {

// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent caller input.
class InputError : public Error {
 public:
  using Error::Error;
};

// A bounded enumeration or search would exceed its configured capacity.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A guarantee that must hold at strict constants was observed broken.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A precondition of an orchestrating operation failed (criterion, certificate).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Derived parameters fail a required inequality.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A randomized solve gave up (resample cap, unsatisfiable component).
class SolveFailure : public Error {
 public:
  using Error::Error;
};

// A bucket's palette is too small for its measured degree.
class ReductionViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace lll
