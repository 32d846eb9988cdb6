#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparseproc {

enum class ErrorKind {
  order_violation,
  riesz_violation,
  factorization_failure,
  unsupported,
  signal_too_short,
  quadrature_failure,
  undefined,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::order_violation: return "OrderViolation";
    case ErrorKind::riesz_violation: return "RieszViolation";
    case ErrorKind::factorization_failure: return "FactorizationFailure";
    case ErrorKind::unsupported: return "Unsupported";
    case ErrorKind::signal_too_short: return "SignalTooShort";
    case ErrorKind::quadrature_failure: return "QuadratureFailure";
    case ErrorKind::undefined: return "Undefined";
  }
  return "Unknown";
}

/// Base of every error raised by the library. The kind names the failing
/// contract so front ends can report it without parsing the message.
class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define SPARSEPROC_DEFINE_ERROR(Name, Kind)                                  \
  class Name : public ModelError {                                          \
   public:                                                                  \
    explicit Name(const std::string& what) : ModelError(ErrorKind::Kind, what) {} \
  };

SPARSEPROC_DEFINE_ERROR(OrderViolation, order_violation)
SPARSEPROC_DEFINE_ERROR(RieszViolation, riesz_violation)
SPARSEPROC_DEFINE_ERROR(FactorizationFailure, factorization_failure)
SPARSEPROC_DEFINE_ERROR(Unsupported, unsupported)
SPARSEPROC_DEFINE_ERROR(SignalTooShort, signal_too_short)
SPARSEPROC_DEFINE_ERROR(QuadratureFailure, quadrature_failure)
SPARSEPROC_DEFINE_ERROR(UndefinedMoment, undefined)

#undef SPARSEPROC_DEFINE_ERROR

}  // namespace sparseproc
