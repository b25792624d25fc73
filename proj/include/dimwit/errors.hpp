#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dimwit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or fields do not match what the scenario requires.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// The operation is not defined for this scenario shape (e.g. W needs |X| = 2|Y|).
class UnsupportedScenario : public Error {
 public:
  using Error::Error;
};

/// Exact operation applied to float data, or vice versa.
class WrongModeError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition (index range, parameter domain).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a probabilistic or operator constraint.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// Enumeration would exceed the configured cap.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::uint64_t required, std::uint64_t cap)
      : Error(what + ": requires " + std::to_string(required) + " items, cap is " +
              std::to_string(cap)),
        required_(required),
        cap_(cap) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

/// The LP solver stopped without reaching a verdict (iteration limit, numerical breakdown).
class SolverFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace dimwit
