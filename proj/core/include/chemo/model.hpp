#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemo/grid.hpp"

namespace chemo {

/// Coefficients of the attraction-repulsion system
///
///   u_t = lap(u) - chi div(u grad v) + xi div(u grad w)
///   0   = lap(v) + alpha u^rho - beta v
///   0   = lap(w) + gamma u - delta w
///
/// with zero-flux boundaries. `dim` is only used by the bounds arithmetic;
/// the simulator is two-dimensional.
struct ModelParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double delta = 1.0;
  double chi = 1.0;
  double xi = 1.0;
  double rho = 0.5;
  int dim = 2;
};

/// Throws NonPositiveCoefficient(name) or RhoOutOfRange. rho == 1 is admitted.
void validate_params(const ModelParams& p);

/// As validate_params, but chi = 0 and xi = 0 are admitted (pure diffusion
/// and one-signal reductions of the stepper).
void validate_transport_params(const ModelParams& p);

enum class Regime {
  SublinearGlobal,
  RepulsionDominant,
  SubcriticalMass,
  SupercriticalMass,
  CriticalMass,
  Indeterminate,
};

std::string_view to_string(Regime r);

/// Expected long-time behaviour implied by a regime.
enum class Prediction { Bounded, Blowup, Indeterminate };

std::string_view to_string(Prediction p);

struct RegimeInfo {
  Regime regime = Regime::Indeterminate;
  /// 4*pi/(chi*alpha - xi*gamma) whenever that quantity is positive.
  std::optional<double> threshold;
  /// Global boundedness is guaranteed only for rho < 1.
  bool theorem_applies = false;
  Prediction prediction = Prediction::Indeterminate;
};

/// Relative tolerance on |m (chi alpha - xi gamma) - 4 pi| for CriticalMass.
inline constexpr double kCriticalMassTolerance = 1e-9;

RegimeInfo classify_regime(const ModelParams& p, double mass);

struct Bump {
  std::array<double, 2> center{0.5, 0.5};
  double width = 0.1;
  double amplitude = 1.0;
};

/// Recipe for u0. Gaussian bumps are amplitude * exp(-|x-c|^2 / (2 width^2))
/// and are cell-averaged exactly through erf, so the discrete mass equals the
/// integral of the bump over the rectangle up to rounding.
struct InitialData {
  enum class Kind { Uniform, GaussianBump, MultiBump, FromFile };

  Kind kind = Kind::Uniform;
  double value = 1.0;        // Uniform
  std::vector<Bump> bumps;   // GaussianBump (first entry) / MultiBump
  double background = 0.0;   // added to bump kinds
  std::string path;          // FromFile
  std::optional<double> mass;  // rescale the result to this integral
};

struct InitialField {
  Field u;
  double mass = 0.0;
};

InitialField build_initial_data(const InitialData& recipe, const DomainSpec& dom);

}  // namespace chemo
