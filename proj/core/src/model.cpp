#include "chemo/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chemo/error.hpp"

namespace chemo {

namespace {

void check_params(const ModelParams& p, bool allow_zero_sensitivity) {
  const std::pair<const char*, double> coefficients[] = {
      {"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}, {"delta", p.delta},
  };
  for (const auto& [name, value] : coefficients) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw Error(ErrorCode::NonPositiveCoefficient, name);
    }
  }
  const std::pair<const char*, double> sensitivities[] = {{"chi", p.chi}, {"xi", p.xi}};
  for (const auto& [name, value] : sensitivities) {
    const bool ok = allow_zero_sensitivity ? value >= 0.0 : value > 0.0;
    if (!ok || !std::isfinite(value)) throw Error(ErrorCode::NonPositiveCoefficient, name);
  }
  if (!(p.rho > 0.0 && p.rho <= 1.0)) {
    throw Error(ErrorCode::RhoOutOfRange, "rho must lie in (0, 1], got " + std::to_string(p.rho));
  }
  if (p.dim < 2) {
    throw Error(ErrorCode::DomainError, "dimension must be at least 2");
  }
}

}  // namespace

void validate_params(const ModelParams& p) { check_params(p, false); }

void validate_transport_params(const ModelParams& p) { check_params(p, true); }

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::SublinearGlobal: return "SublinearGlobal";
    case Regime::RepulsionDominant: return "RepulsionDominant";
    case Regime::SubcriticalMass: return "SubcriticalMass";
    case Regime::SupercriticalMass: return "SupercriticalMass";
    case Regime::CriticalMass: return "CriticalMass";
    case Regime::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

std::string_view to_string(Prediction p) {
  switch (p) {
    case Prediction::Bounded: return "bounded";
    case Prediction::Blowup: return "blowup";
    case Prediction::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

RegimeInfo classify_regime(const ModelParams& p, double mass) {
  validate_params(p);
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::DomainError, "mass must be positive");
  }
  RegimeInfo info;
  const double attraction = p.chi * p.alpha;
  const double repulsion = p.xi * p.gamma;
  const double excess = attraction - repulsion;
  if (excess > 0.0) {
    info.threshold = 4.0 * std::numbers::pi / excess;
  }

  if (p.rho < 1.0) {
    info.regime = Regime::SublinearGlobal;
    info.theorem_applies = true;
    info.prediction = Prediction::Bounded;
    return info;
  }

  // Balanced sensitivities (excess zero up to rounding of the products) are
  // covered by neither the repulsive nor the critical-mass statement.
  const double scale = std::max(attraction, repulsion);
  if (std::abs(excess) <= 1e-12 * scale) {
    info.regime = Regime::Indeterminate;
    info.threshold.reset();
    return info;
  }
  if (excess < 0.0) {
    info.regime = Regime::RepulsionDominant;
    info.prediction = Prediction::Bounded;
    return info;
  }
  if (p.dim != 2) {
    info.regime = Regime::Indeterminate;
    return info;
  }
  const double four_pi = 4.0 * std::numbers::pi;
  const double gap = mass * excess - four_pi;
  if (std::abs(gap) <= kCriticalMassTolerance * four_pi) {
    info.regime = Regime::CriticalMass;
  } else if (gap < 0.0) {
    info.regime = Regime::SubcriticalMass;
    info.prediction = Prediction::Bounded;
  } else {
    info.regime = Regime::SupercriticalMass;
    info.prediction = Prediction::Blowup;
  }
  return info;
}

namespace {

// Integral of exp(-(s-c)^2 / (2 w^2)) over [a, b], using erfc on the side
// where erf differences would cancel.
double gaussian_interval(double a, double b, double c, double w) {
  const double scale = std::sqrt(2.0) * w;
  const double za = (a - c) / scale;
  const double zb = (b - c) / scale;
  double diff;
  if (za >= 0.0) {
    diff = std::erfc(za) - std::erfc(zb);
  } else if (zb <= 0.0) {
    diff = std::erfc(-zb) - std::erfc(-za);
  } else {
    diff = std::erf(zb) - std::erf(za);
  }
  return 0.5 * std::sqrt(std::numbers::pi) * scale * diff;
}

void add_bump(Field& u, const Bump& b) {
  if (b.amplitude < 0.0) {
    throw Error(ErrorCode::NegativeAmplitude, "bump amplitude must be nonnegative");
  }
  if (!(b.width > 0.0)) {
    throw Error(ErrorCode::DomainError, "bump width must be positive");
  }
  const auto& dom = u.domain();
  const double h = dom.h();
  std::vector<double> gx(dom.nx()), gy(dom.ny());
  for (int i = 0; i < dom.nx(); ++i) {
    gx[i] = gaussian_interval(i * h, (i + 1) * h, b.center[0], b.width) / h;
  }
  for (int j = 0; j < dom.ny(); ++j) {
    gy[j] = gaussian_interval(j * h, (j + 1) * h, b.center[1], b.width) / h;
  }
  for (int j = 0; j < dom.ny(); ++j) {
    for (int i = 0; i < dom.nx(); ++i) u(i, j) += b.amplitude * gx[i] * gy[j];
  }
}

}  // namespace

InitialField build_initial_data(const InitialData& recipe, const DomainSpec& dom) {
  dom.validate();
  Field u(dom, 0.0);
  switch (recipe.kind) {
    case InitialData::Kind::Uniform:
      if (recipe.value < 0.0) throw Error(ErrorCode::NegativeAmplitude, "uniform value < 0");
      u = Field(dom, recipe.value);
      break;
    case InitialData::Kind::GaussianBump:
    case InitialData::Kind::MultiBump: {
      if (recipe.bumps.empty()) throw Error(ErrorCode::ZeroField, "no bumps given");
      if (recipe.background < 0.0) {
        throw Error(ErrorCode::NegativeAmplitude, "background must be nonnegative");
      }
      u = Field(dom, recipe.background);
      const std::size_t count = recipe.kind == InitialData::Kind::GaussianBump ? 1 : recipe.bumps.size();
      for (std::size_t k = 0; k < count; ++k) add_bump(u, recipe.bumps[k]);
      break;
    }
    case InitialData::Kind::FromFile:
      u = read_field_csv(dom, recipe.path);
      if (!u.all_finite()) throw Error(ErrorCode::NonFiniteField, recipe.path);
      if (u.min() < 0.0) throw Error(ErrorCode::NegativeAmplitude, recipe.path + " has u0 < 0");
      break;
  }
  double mass = integrate(u);
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::ZeroField, "initial data must not vanish identically");
  }
  if (recipe.mass) {
    if (!(*recipe.mass > 0.0)) throw Error(ErrorCode::ZeroField, "target mass must be positive");
    const double scale = *recipe.mass / mass;
    for (double& x : u.values()) x *= scale;
    mass = integrate(u);
  }
  return {std::move(u), mass};
}

}  // namespace chemo
