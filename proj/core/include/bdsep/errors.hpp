#pragma once

#include <stdexcept>
#include <string>

namespace bdsep {

enum class ErrorCode {
  NotStochastic,
  Reducible,
  OutOfRange,
  Overflow,
  ConvergenceFailure,
  NoClosedForm,
  PrecisionLoss,
  OutsideRadius,
  InvalidParams,
  NonPositiveTarget,
  TooFewPoints,
};

// Base of every domain error thrown by the library.  The CLI maps these to
// exit code 1; file and parse problems use IoError and map to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

#define BDSEP_DEFINE_ERROR(Name)                                     \
  struct Name : Error {                                              \
    explicit Name(const std::string& w) : Error(ErrorCode::Name, w) {} \
  }

BDSEP_DEFINE_ERROR(NotStochastic);
BDSEP_DEFINE_ERROR(Reducible);
BDSEP_DEFINE_ERROR(OutOfRange);
BDSEP_DEFINE_ERROR(Overflow);
BDSEP_DEFINE_ERROR(ConvergenceFailure);
BDSEP_DEFINE_ERROR(NoClosedForm);
BDSEP_DEFINE_ERROR(PrecisionLoss);
BDSEP_DEFINE_ERROR(OutsideRadius);
BDSEP_DEFINE_ERROR(InvalidParams);
BDSEP_DEFINE_ERROR(NonPositiveTarget);
BDSEP_DEFINE_ERROR(TooFewPoints);

#undef BDSEP_DEFINE_ERROR

struct IoError : std::runtime_error {
  explicit IoError(const std::string& w) : std::runtime_error(w) {}
};

}  // namespace bdsep
