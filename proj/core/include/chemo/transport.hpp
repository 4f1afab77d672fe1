#pragma once

#include <string_view>
#include <vector>

#include "chemo/elliptic.hpp"
#include "chemo/grid.hpp"
#include "chemo/model.hpp"

namespace chemo {

enum class RunStatus { Running, SteadyDetected, BlowupSuspected, Completed };

std::string_view to_string(RunStatus s);

struct SimState {
  Field u;
  Field v;
  Field w;
  double t = 0.0;
  long step = 0;
  RunStatus status = RunStatus::Running;
};

enum class Scheme { ExplicitUpwind, ImexDiffusion };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);

struct StepperConfig {
  double dt_max = 1e-3;
  double cfl_safety = 0.4;
  double dt_min = 1e-12;
  Scheme scheme = Scheme::ExplicitUpwind;

  void validate() const;
};

/// Builds a state at t = 0 with signals solved from u0.
SimState make_initial_state(Field u0, const ModelParams& p, HelmholtzSolver& solver);

/// Combined chemotactic potential phi = chi v - xi w. Cells drift with
/// velocity +grad(phi): up the attractant, down the repellent.
Field drift_potential(const SimState& state, const ModelParams& p);

/// Face quantities of u_t = div(grad u - u grad phi).
///
/// fx(i, j) sits on the face between cells (i-1, j) and (i, j), for
/// i = 0..nx; fy likewise in y. Boundary faces are exactly zero.
/// F = (u_R - u_L)/h - u_up (phi_R - phi_L)/h where u_up is the donor cell of
/// the drift velocity (phi_R - phi_L)/h.
struct FaceFluxes {
  int nx = 0;
  int ny = 0;
  std::vector<double> fx;  // (nx + 1) * ny, index j * (nx + 1) + i
  std::vector<double> fy;  // nx * (ny + 1), index j * nx + i

  double x(int i, int j) const { return fx[static_cast<std::size_t>(j) * (nx + 1) + i]; }
  double y(int i, int j) const { return fy[static_cast<std::size_t>(j) * nx + i]; }
};

FaceFluxes face_fluxes(const Field& u, const Field& phi, bool include_diffusion = true);

/// Divergence (F_right - F_left + F_top - F_bottom) / h per cell.
Field flux_divergence(const FaceFluxes& f, const DomainSpec& dom);

/// Largest per-cell sum of outgoing drift speeds |dphi|/h.
double max_outflow_speed(const Field& phi);

struct DtChoice {
  double dt = 0.0;
  /// The unclamped CFL value fell below dt_min.
  bool clamped_at_min = false;
};

/// dt = safety * min(h^2 / (2 dim), h / S) clamped to [dt_min, dt_max], where
/// S is max_outflow_speed(phi). The diffusive bound is dropped for IMEX.
DtChoice stable_dt(const SimState& state, const ModelParams& p, const StepperConfig& cfg);
DtChoice stable_dt_for_speed(double outflow_speed, double h, const StepperConfig& cfg);

/// Advances SimState by conservative finite volumes, then re-solves v and w.
class Stepper {
 public:
  Stepper(const DomainSpec& dom, ModelParams params, StepperConfig cfg);

  const ModelParams& params() const { return params_; }
  const StepperConfig& config() const { return cfg_; }
  HelmholtzSolver& solver() { return solver_; }

  SimState initial_state(Field u0) { return make_initial_state(std::move(u0), params_, solver_); }

  DtChoice choose_dt(const SimState& state) const { return stable_dt(state, params_, cfg_); }

  /// One step with the CFL dt. Throws NonFiniteState if u' has NaN/Inf.
  SimState step(const SimState& state);

  /// One step with a caller-chosen dt.
  SimState advance(const SimState& state, double dt);

 private:
  ModelParams params_;
  StepperConfig cfg_;
  HelmholtzSolver solver_;
};

/// Free-function form; builds a transient solver.
SimState step(const SimState& state, const ModelParams& p, const StepperConfig& cfg);

}  // namespace chemo
