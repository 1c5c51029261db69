#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace regulab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: the caller asked for something outside an operation's domain.
/// The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The input was valid but the numerics could not deliver the requested
/// accuracy. The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ToleranceNotMet : public NumericalError {
 public:
  ToleranceNotMet(const std::string& what, double value_abs, double error_estimate)
      : NumericalError(what), value_abs_(value_abs), error_estimate_(error_estimate) {}
  double value_abs() const noexcept { return value_abs_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double value_abs_;
  double error_estimate_;
};

#define REGULAB_DEFINE_VALIDATION_ERROR(Name)      \
  class Name : public ValidationError {            \
   public:                                         \
    using ValidationError::ValidationError;        \
  };

REGULAB_DEFINE_VALIDATION_ERROR(InvalidArgument)
REGULAB_DEFINE_VALIDATION_ERROR(InvalidCutoff)
REGULAB_DEFINE_VALIDATION_ERROR(TooFewSamples)
REGULAB_DEFINE_VALIDATION_ERROR(DomainError)
REGULAB_DEFINE_VALIDATION_ERROR(InvalidFrequency)
REGULAB_DEFINE_VALIDATION_ERROR(OutsideRegionI)
REGULAB_DEFINE_VALIDATION_ERROR(SingularRegulator)
REGULAB_DEFINE_VALIDATION_ERROR(ZeroFrequency)
REGULAB_DEFINE_VALIDATION_ERROR(SplitStraddlesStep)
REGULAB_DEFINE_VALIDATION_ERROR(DegenerateMap)

#undef REGULAB_DEFINE_VALIDATION_ERROR

/// Parse failure; `position` is the 0-based character offset in the input.
class SyntaxError : public ValidationError {
 public:
  SyntaxError(const std::string& msg, std::size_t position)
      : ValidationError(msg + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifier : public ValidationError {
 public:
  UnknownIdentifier(const std::string& name, std::size_t position)
      : ValidationError("unknown identifier '" + name + "' at position " +
                        std::to_string(position)),
        name_(name),
        position_(position) {}
  const std::string& name() const noexcept { return name_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::string name_;
  std::size_t position_;
};

/// A weight function was found nonpositive at `x`.
class NonpositiveWeight : public ValidationError {
 public:
  NonpositiveWeight(double x, double value)
      : ValidationError("weight function is not strictly positive: rho(" +
                        std::to_string(x) + ") = " + std::to_string(value)),
        x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

}  // namespace regulab
