#include "chemo/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "chemo/error.hpp"

namespace chemo {

namespace {

double positivity_ratio(const Field& u) {
  const double hi = u.max();
  return hi > 0.0 ? std::min(u.min(), 0.0) / hi : 0.0;
}

double relative_change(const Field& a, const Field& b, double dt) {
  double diff = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) diff = std::max(diff, std::abs(b[k] - a[k]));
  const double scale = sup_norm(a);
  return scale > 0.0 ? diff / (dt * scale) : 0.0;
}

}  // namespace

RunResult run(const SimState& initial, Stepper& stepper, const RunOptions& opts,
              const StepObserver& observer) {
  if (opts.sample_every <= 0) throw Error(ErrorCode::ConfigError, "sample_every must be positive");
  RunResult res;
  res.final_state = initial;
  res.initial_mass = integrate(initial.u);
  res.blowup_threshold = opts.blowup_threshold.value_or(
      opts.blowup_factor * res.initial_mass / initial.u.domain().volume());
  res.worst_positivity = positivity_ratio(initial.u);

  if (!(opts.t_end > initial.t)) {
    res.final_state.status = RunStatus::Completed;
    return res;
  }

  auto take_sample = [&](const SimState& s) {
    DiagnosticsRecord r = sample(s, opts.ps, opts.bounds);
    if (!res.series.empty()) link_samples(res.series.back(), r);
    res.series.push_back(std::move(r));
  };

  SimState state = initial;
  state.status = RunStatus::Running;
  take_sample(state);
  const double t_tol = 1e-14 * std::max(1.0, std::abs(opts.t_end));

  while (state.status == RunStatus::Running) {
    if (detect_blowup(state, res.blowup_threshold)) {
      state.status = RunStatus::BlowupSuspected;
      break;
    }
    if (state.t >= opts.t_end - t_tol) {
      state.status = RunStatus::Completed;
      break;
    }
    if (state.step >= opts.max_steps) {
      state.status = RunStatus::Completed;
      break;
    }
    const DtChoice choice = stepper.choose_dt(state);
    if (choice.clamped_at_min) {
      res.dt_clamped = true;
      state.status = RunStatus::BlowupSuspected;
      break;
    }
    const bool truncated = opts.t_end - state.t < choice.dt;
    const double dt = truncated ? opts.t_end - state.t : choice.dt;

    SimState next;
    try {
      next = stepper.advance(state, dt);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonFiniteState && e.code() != ErrorCode::NonFiniteField &&
          e.code() != ErrorCode::SolverDiverged) {
        throw;
      }
      res.non_finite = true;
      state.status = RunStatus::BlowupSuspected;
      break;
    }

    const double change = relative_change(state.u, next.u, dt);
    res.worst_positivity = std::min(res.worst_positivity, positivity_ratio(next.u));
    const double mass = integrate(next.u);
    res.max_mass_drift =
        std::max(res.max_mass_drift, std::abs(mass - res.initial_mass) / res.initial_mass);

    state = std::move(next);
    if (observer) observer(state);
    if (state.step % opts.sample_every == 0) take_sample(state);
    if (opts.stop_on_steady && !truncated && change < opts.steady_tolerance) {
      state.status = RunStatus::SteadyDetected;
    }
  }

  if (res.series.back().step != state.step) take_sample(state);
  res.final_state = std::move(state);
  return res;
}

}  // namespace chemo
