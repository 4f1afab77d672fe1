#include "chemo/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chemo/error.hpp"

namespace chemo {

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Running: return "Running";
    case RunStatus::SteadyDetected: return "SteadyDetected";
    case RunStatus::BlowupSuspected: return "BlowupSuspected";
    case RunStatus::Completed: return "Completed";
  }
  return "Running";
}

std::string_view to_string(Scheme s) {
  return s == Scheme::ExplicitUpwind ? "explicit-upwind" : "imex-diffusion";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "explicit-upwind") return Scheme::ExplicitUpwind;
  if (name == "imex-diffusion") return Scheme::ImexDiffusion;
  throw Error(ErrorCode::ConfigError, "unknown scheme '" + std::string(name) +
                                          "' (expected explicit-upwind or imex-diffusion)");
}

void StepperConfig::validate() const {
  if (!(dt_max > 0.0) || !(dt_min > 0.0) || !(dt_min < dt_max)) {
    throw Error(ErrorCode::ConfigError, "need 0 < dt_min < dt_max");
  }
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "cfl_safety must lie in (0, 1]");
  }
}

namespace {

// Signals see max(u, 0): cancellation in the update may leave cells at
// -1e-17 or so, which u^rho cannot take. Anything beyond the positivity
// tolerance is a real failure.
Field clipped_density(const Field& u) {
  const double hi = u.max();
  const double lo = u.min();
  if (lo >= 0.0) return u;
  if (lo < -1e-13 * std::max(hi, 0.0)) {
    throw Error(ErrorCode::NegativeDensity,
                "u min " + std::to_string(lo) + " violates the positivity tolerance");
  }
  Field out = u;
  for (double& x : out.values()) x = std::max(x, 0.0);
  return out;
}

}  // namespace

SimState make_initial_state(Field u0, const ModelParams& p, HelmholtzSolver& solver) {
  validate_transport_params(p);
  SimState s;
  auto sig = solve_signals(clipped_density(u0), p, solver);
  s.u = std::move(u0);
  s.v = std::move(sig.v);
  s.w = std::move(sig.w);
  return s;
}

Field drift_potential(const SimState& state, const ModelParams& p) {
  Field phi(state.v.domain());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    phi[k] = p.chi * state.v[k] - p.xi * state.w[k];
  }
  return phi;
}

FaceFluxes face_fluxes(const Field& u, const Field& phi, bool include_diffusion) {
  const int nx = u.nx();
  const int ny = u.ny();
  const double inv_h = 1.0 / u.domain().h();
  FaceFluxes f;
  f.nx = nx;
  f.ny = ny;
  f.fx.assign(static_cast<std::size_t>(nx + 1) * ny, 0.0);
  f.fy.assign(static_cast<std::size_t>(nx) * (ny + 1), 0.0);

  auto flux = [&](double ul, double ur, double pl, double pr) {
    const double dphi = pr - pl;
    const double donor = dphi > 0.0 ? ul : ur;
    const double diffusive = include_diffusion ? (ur - ul) * inv_h : 0.0;
    return diffusive - donor * dphi * inv_h;
  };

  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      f.fx[static_cast<std::size_t>(j) * (nx + 1) + i] =
          flux(u(i - 1, j), u(i, j), phi(i - 1, j), phi(i, j));
    }
  }
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      f.fy[static_cast<std::size_t>(j) * nx + i] =
          flux(u(i, j - 1), u(i, j), phi(i, j - 1), phi(i, j));
    }
  }
  return f;
}

Field flux_divergence(const FaceFluxes& f, const DomainSpec& dom) {
  Field out(dom);
  const double inv_h = 1.0 / dom.h();
  for (int j = 0; j < f.ny; ++j) {
    for (int i = 0; i < f.nx; ++i) {
      out(i, j) = ((f.x(i + 1, j) - f.x(i, j)) + (f.y(i, j + 1) - f.y(i, j))) * inv_h;
    }
  }
  return out;
}

double max_outflow_speed(const Field& phi) {
  const int nx = phi.nx();
  const int ny = phi.ny();
  const double inv_h = 1.0 / phi.domain().h();
  std::vector<double> out(phi.size(), 0.0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double a = (phi(i + 1, j) - phi(i, j)) * inv_h;
      if (a > 0.0) out[phi.index(i, j)] += a;
      else out[phi.index(i + 1, j)] -= a;
    }
  }
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double a = (phi(i, j + 1) - phi(i, j)) * inv_h;
      if (a > 0.0) out[phi.index(i, j)] += a;
      else out[phi.index(i, j + 1)] -= a;
    }
  }
  return *std::max_element(out.begin(), out.end());
}

DtChoice stable_dt_for_speed(double outflow_speed, double h, const StepperConfig& cfg) {
  constexpr int kDim = 2;
  double bound = std::numeric_limits<double>::infinity();
  if (cfg.scheme == Scheme::ExplicitUpwind) bound = h * h / (2.0 * kDim);
  if (outflow_speed > 0.0) bound = std::min(bound, h / outflow_speed);
  DtChoice c;
  c.dt = cfg.cfl_safety * bound;
  if (!(c.dt >= cfg.dt_min)) {
    c.dt = cfg.dt_min;
    c.clamped_at_min = true;
  }
  c.dt = std::min(c.dt, cfg.dt_max);
  return c;
}

DtChoice stable_dt(const SimState& state, const ModelParams& p, const StepperConfig& cfg) {
  const Field phi = drift_potential(state, p);
  return stable_dt_for_speed(max_outflow_speed(phi), state.u.domain().h(), cfg);
}

Stepper::Stepper(const DomainSpec& dom, ModelParams params, StepperConfig cfg)
    : params_(params), cfg_(cfg), solver_(dom) {
  validate_transport_params(params_);
  cfg_.validate();
}

SimState Stepper::advance(const SimState& state, double dt) {
  const DomainSpec& dom = state.u.domain();
  const Field phi = drift_potential(state, params_);
  SimState next;
  if (cfg_.scheme == Scheme::ExplicitUpwind) {
    const Field div = flux_divergence(face_fluxes(state.u, phi, true), dom);
    next.u = state.u;
    for (std::size_t k = 0; k < next.u.size(); ++k) next.u[k] += dt * div[k];
  } else {
    // (I - dt lap) u' = u + dt A(u), i.e. -lap u' + u'/dt = (u + dt A(u)) / dt.
    const Field div = flux_divergence(face_fluxes(state.u, phi, false), dom);
    Field rhs(dom);
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = (state.u[k] + dt * div[k]) / dt;
    next.u = solver_.solve(rhs, 1.0 / dt);
  }
  if (!next.u.all_finite()) {
    throw Error(ErrorCode::NonFiniteState, "u became non-finite at t=" + std::to_string(state.t));
  }
  auto sig = solve_signals(clipped_density(next.u), params_, solver_);
  next.v = std::move(sig.v);
  next.w = std::move(sig.w);
  next.t = state.t + dt;
  next.step = state.step + 1;
  next.status = RunStatus::Running;
  return next;
}

SimState Stepper::step(const SimState& state) { return advance(state, choose_dt(state).dt); }

SimState step(const SimState& state, const ModelParams& p, const StepperConfig& cfg) {
  Stepper stepper(state.u.domain(), p, cfg);
  return stepper.step(state);
}

}  // namespace chemo
