// sim: command-line front end for the chemotaxis simulator and bounds toolkit.
//
//   sim simulate <cfg> [--t-end T] [--snapshot-every K] [--blowup-threshold U] [--scheme S]
//   sim bounds   <cfg> [--p X]
//   sim sweep    <cfg>
//   sim classify <cfg>
//
// Exit codes: 0 ok, 1 error, 2 suspected blow-up (simulate only).

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "chemo/error.hpp"
#include "chemo/experiment.hpp"

namespace {

struct Overrides {
  std::optional<double> t_end;
  std::optional<long> snapshot_every;
  std::optional<double> blowup_threshold;
  std::optional<double> blowup_factor;
  std::optional<std::string> scheme;
  std::optional<std::string> output;
};

void add_run_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--t-end", o.t_end, "final simulation time");
  cmd->add_option("--snapshot-every", o.snapshot_every, "write u every K steps (0 = final only)");
  cmd->add_option("--blowup-threshold", o.blowup_threshold, "absolute u_max threshold");
  cmd->add_option("--blowup-factor", o.blowup_factor, "threshold as a multiple of m/|Omega|");
  cmd->add_option("--scheme", o.scheme, "explicit-upwind or imex-diffusion");
  cmd->add_option("--output", o.output, "output directory");
}

void apply(const Overrides& o, chemo::ExperimentConfig& cfg) {
  if (o.t_end) cfg.t_end = *o.t_end;
  if (o.snapshot_every) cfg.snapshot_every = *o.snapshot_every;
  if (o.blowup_threshold) cfg.blowup_threshold = *o.blowup_threshold;
  if (o.blowup_factor) cfg.blowup_factor = *o.blowup_factor;
  if (o.scheme) cfg.stepper.scheme = chemo::parse_scheme(*o.scheme);
  if (o.output) cfg.output_dir = *o.output;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attraction-repulsion chemotaxis simulator"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;
  std::optional<double> p;

  auto* simulate = app.add_subcommand("simulate", "run one simulation");
  simulate->add_option("config", config_path, "JSON configuration")->required();
  add_run_flags(simulate, overrides);

  auto* bounds = app.add_subcommand("bounds", "print the analytic constants as JSON");
  bounds->add_option("config", config_path, "JSON configuration")->required();
  bounds->add_option("--p", p, "energy exponent (default 3n/4)");

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep and build a regime map");
  sweep->add_option("config", config_path, "JSON configuration")->required();
  add_run_flags(sweep, overrides);

  auto* classify = app.add_subcommand("classify", "print the predicted regime");
  classify->add_option("config", config_path, "JSON configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : chemo::kExitError;
  }

  chemo::ExperimentConfig cfg;
  try {
    cfg = chemo::load_config(config_path);
    apply(overrides, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return chemo::kExitError;
  }

  if (*simulate) return chemo::cmd_simulate(cfg, std::cout, std::cerr);
  if (*bounds) return chemo::cmd_bounds(cfg, p, std::cout, std::cerr);
  if (*sweep) return chemo::cmd_sweep(cfg, std::cout, std::cerr);
  return chemo::cmd_classify(cfg, std::cout, std::cerr);
}
