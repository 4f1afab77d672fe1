#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chemo {

enum class ErrorCode {
  NonPositiveCoefficient,
  RhoOutOfRange,
  InvalidDomain,
  NegativeAmplitude,
  ZeroField,
  NonFiniteField,
  NegativeFieldWithFractionalPower,
  NonPositiveKappa,
  SolverDiverged,
  MaximumPrincipleViolated,
  NegativeDensity,
  NonFiniteState,
  DomainError,
  RhoNotSublinear,
  EtaOutOfRange,
  ConstantOverflow,
  InsufficientSamples,
  MismatchedP,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace chemo
