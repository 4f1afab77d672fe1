#include "chemo/error.hpp"

namespace chemo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case ErrorCode::RhoOutOfRange: return "RhoOutOfRange";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::NegativeAmplitude: return "NegativeAmplitude";
    case ErrorCode::ZeroField: return "ZeroField";
    case ErrorCode::NonFiniteField: return "NonFiniteField";
    case ErrorCode::NegativeFieldWithFractionalPower: return "NegativeFieldWithFractionalPower";
    case ErrorCode::NonPositiveKappa: return "NonPositiveKappa";
    case ErrorCode::SolverDiverged: return "SolverDiverged";
    case ErrorCode::MaximumPrincipleViolated: return "MaximumPrincipleViolated";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::RhoNotSublinear: return "RhoNotSublinear";
    case ErrorCode::EtaOutOfRange: return "EtaOutOfRange";
    case ErrorCode::ConstantOverflow: return "ConstantOverflow";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::MismatchedP: return "MismatchedP";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace chemo
