#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "chemo/diagnostics.hpp"
#include "chemo/transport.hpp"

namespace chemo {

struct RunOptions {
  double t_end = 1.0;
  /// Absolute u_max threshold for BlowupSuspected. When unset it is
  /// blowup_factor * m / |Omega|.
  std::optional<double> blowup_threshold;
  double blowup_factor = 1e6;
  /// ||u' - u||_inf / (dt ||u||_inf) below this ends the run as SteadyDetected.
  double steady_tolerance = 1e-10;
  bool stop_on_steady = true;
  int sample_every = 10;
  long max_steps = 50'000'000;
  std::vector<double> ps{2.0};
  const BoundsReport* bounds = nullptr;
};

struct RunResult {
  SimState final_state;
  std::vector<DiagnosticsRecord> series;
  double initial_mass = 0.0;
  double blowup_threshold = 0.0;
  /// min over all steps of min(u) / max(u); >= 0 means no negative cell seen.
  double worst_positivity = 0.0;
  /// max over all steps of |m(t) - m0| / m0.
  double max_mass_drift = 0.0;
  bool dt_clamped = false;
  bool non_finite = false;
};

/// Called after every accepted step with the new state.
using StepObserver = std::function<void(const SimState&)>;

/// Steps until t >= t_end, a steady state, or suspected blow-up. A blow-up is
/// suspected when u_max crosses the threshold, when the CFL step falls below
/// dt_min, or when the update produces non-finite values (the last finite
/// state is returned). Samples at the start, every `sample_every` steps, and
/// at the end. t_end <= t0 returns the initial state and an empty series.
RunResult run(const SimState& initial, Stepper& stepper, const RunOptions& opts,
              const StepObserver& observer = {});

}  // namespace chemo
