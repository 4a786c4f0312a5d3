#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace ineqbias {

enum class ErrorCode {
  domain_error,
  empty_parameters,
  length_mismatch,
  invalid_mixing_proportions,
  invalid_shape,
  invalid_rate,
  invalid_argument,
  invalid_sample,
  invalid_sample_size,
  composition_limit_exceeded,
  quadrature_limit_exceeded,
  config_error,
  validation_failed,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain_error: return "domain_error";
    case ErrorCode::empty_parameters: return "empty_parameters";
    case ErrorCode::length_mismatch: return "length_mismatch";
    case ErrorCode::invalid_mixing_proportions: return "invalid_mixing_proportions";
    case ErrorCode::invalid_shape: return "invalid_shape";
    case ErrorCode::invalid_rate: return "invalid_rate";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::invalid_sample: return "invalid_sample";
    case ErrorCode::invalid_sample_size: return "invalid_sample_size";
    case ErrorCode::composition_limit_exceeded: return "composition_limit_exceeded";
    case ErrorCode::quadrature_limit_exceeded: return "quadrature_limit_exceeded";
    case ErrorCode::config_error: return "config_error";
    case ErrorCode::validation_failed: return "validation_failed";
  }
  return "unknown";
}

/// Library-wide exception. `code()` is stable and machine readable; `context()`
/// carries free-form detail such as the offending value or the estimator name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string context = {})
      : std::runtime_error(message), code_(code), context_(std::move(context)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorCode code_;
  std::string context_;
};

}  // namespace ineqbias
