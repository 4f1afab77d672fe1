#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemo/bounds.hpp"
#include "chemo/model.hpp"
#include "chemo/simulation.hpp"
#include "chemo/transport.hpp"

namespace chemo {

struct DiagnosticsConfig {
  std::vector<double> ps{2.0};
  int sample_every = 10;
  std::optional<double> c_gn;
  std::optional<double> c_e;
  /// Exponent for the attached BoundsReport; defaults to 3n/4.
  std::optional<double> bounds_p;
};

struct SweepAxis {
  std::string name;  // a ModelParams field or "mass"
  std::vector<double> values;
};

struct ExperimentConfig {
  DomainSpec domain;
  ModelParams params;
  InitialData initial;
  StepperConfig stepper;
  double t_end = 1.0;
  std::optional<double> blowup_threshold;
  double blowup_factor = 1e6;
  bool stop_on_steady = true;
  long max_steps = 50'000'000;
  DiagnosticsConfig diagnostics;
  std::filesystem::path output_dir = "out";
  long snapshot_every = 0;
  std::vector<SweepAxis> sweep;
  int workers = 1;
};

/// Parses the JSON configuration. Errors are ConfigError naming the offending
/// field ("params.rho") or the parse position.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Sets a ModelParams field or the initial mass by name. ConfigError if unknown.
void apply_axis_value(ExperimentConfig& cfg, std::string_view axis, double value);

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBlowup = 2;

struct SimulationOutcome {
  RunResult result;
  RegimeInfo regime;
  std::optional<BoundsReport> bounds;
  double wall_seconds = 0.0;
  int exit_code = kExitOk;
};

/// Runs one simulation and writes diagnostics.csv, summary.json,
/// diagnostics.svg, snapshots/ (and bounds.json for rho < 1) into
/// cfg.output_dir.
SimulationOutcome simulate(const ExperimentConfig& cfg);

std::string bounds_report_json(const BoundsReport& report);
BoundsReport bounds_for_config(const ExperimentConfig& cfg, std::optional<double> p = {});

struct SweepPoint {
  std::vector<double> values;
  Prediction prediction = Prediction::Indeterminate;
  std::string observed;  // "bounded", "blowup" or "failed"
  std::string agreement;  // "1", "0" or "-" when the prediction is indeterminate
  std::string error;
};

/// One simulation per point of the Cartesian product of the axes, run on a
/// pool of cfg.workers threads (SIM_WORKERS overrides). Writes
/// regime_map.csv, regime_map.svg and point_NNN/ directories.
std::vector<SweepPoint> sweep(const ExperimentConfig& cfg);

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bounds(const ExperimentConfig& cfg, std::optional<double> p, std::ostream& out,
               std::ostream& err);
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_classify(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace chemo
