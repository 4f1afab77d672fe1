#include "chemo/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "chemo/error.hpp"
#include "chemo/svg.hpp"

namespace chemo {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) config_error("'" + where + "' must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.contains(key)) config_error("unknown field '" + where + "." + key + "'");
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) config_error("missing field '" + where + "." + key + "'");
  return obj.at(key);
}

double get_number(const json& v, const std::string& name) {
  if (!v.is_number()) config_error("field '" + name + "' must be a number");
  return v.get<double>();
}

double number_at(const json& obj, const std::string& where, const char* key) {
  return get_number(require(obj, where, key), where + "." + key);
}

template <typename T>
void optional_number(const json& obj, const std::string& where, const char* key, T& out) {
  if (obj.contains(key)) out = static_cast<T>(get_number(obj.at(key), where + "." + key));
}

void optional_number(const json& obj, const std::string& where, const char* key,
                     std::optional<double>& out) {
  if (obj.contains(key)) out = get_number(obj.at(key), where + "." + key);
}

std::array<double, 2> pair_of_numbers(const json& v, const std::string& name) {
  if (!v.is_array() || v.size() != 2) config_error("field '" + name + "' must be a 2-element array");
  return {get_number(v[0], name + "[0]"), get_number(v[1], name + "[1]")};
}

std::vector<double> list_of_numbers(const json& v, const std::string& name) {
  if (!v.is_array()) config_error("field '" + name + "' must be an array");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(get_number(v[k], name + "[" + std::to_string(k) + "]"));
  }
  return out;
}

Bump parse_bump(const json& b, const std::string& where) {
  check_keys(b, where, {"center", "width", "amplitude"});
  Bump bump;
  bump.center = pair_of_numbers(require(b, where, "center"), where + ".center");
  bump.width = number_at(b, where, "width");
  bump.amplitude = number_at(b, where, "amplitude");
  return bump;
}

InitialData parse_initial(const json& j) {
  const std::string where = "initial";
  check_keys(j, where, {"kind", "value", "center", "width", "amplitude", "background", "bumps",
                        "path", "mass"});
  const json& kind = require(j, where, "kind");
  if (!kind.is_string()) config_error("field 'initial.kind' must be a string");
  const auto name = kind.get<std::string>();
  InitialData d;
  if (name == "uniform") {
    d.kind = InitialData::Kind::Uniform;
    d.value = number_at(j, where, "value");
  } else if (name == "gaussian-bump") {
    d.kind = InitialData::Kind::GaussianBump;
    Bump b;
    b.center = pair_of_numbers(require(j, where, "center"), "initial.center");
    b.width = number_at(j, where, "width");
    b.amplitude = number_at(j, where, "amplitude");
    d.bumps.push_back(b);
  } else if (name == "multi-bump") {
    d.kind = InitialData::Kind::MultiBump;
    const json& bumps = require(j, where, "bumps");
    if (!bumps.is_array() || bumps.empty()) config_error("'initial.bumps' must be a non-empty array");
    for (std::size_t k = 0; k < bumps.size(); ++k) {
      d.bumps.push_back(parse_bump(bumps[k], "initial.bumps[" + std::to_string(k) + "]"));
    }
  } else if (name == "from-file") {
    d.kind = InitialData::Kind::FromFile;
    const json& p = require(j, where, "path");
    if (!p.is_string()) config_error("field 'initial.path' must be a string");
    d.path = p.get<std::string>();
  } else {
    config_error("unknown initial.kind '" + name +
                 "' (expected uniform, gaussian-bump, multi-bump or from-file)");
  }
  optional_number(j, where, "background", d.background);
  optional_number(j, where, "mass", d.mass);
  return d;
}

std::vector<SweepAxis> parse_sweep(const json& j) {
  check_keys(j, "sweep", {"axis", "values", "axes"});
  std::vector<SweepAxis> axes;
  auto parse_axis = [&](const json& a, const std::string& where) {
    const json& name = require(a, where, a.contains("name") ? "name" : "axis");
    if (!name.is_string()) config_error("'" + where + ".axis' must be a string");
    axes.push_back({name.get<std::string>(), list_of_numbers(require(a, where, "values"),
                                                             where + ".values")});
  };
  if (j.contains("axes")) {
    const json& list = j.at("axes");
    if (!list.is_array()) config_error("'sweep.axes' must be an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string where = "sweep.axes[" + std::to_string(k) + "]";
      check_keys(list[k], where, {"name", "axis", "values"});
      parse_axis(list[k], where);
    }
  } else {
    parse_axis(j, "sweep");
  }
  return axes;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
  check_keys(root, "config", {"domain", "params", "initial", "stepper", "diagnostics", "output",
                              "sweep", "workers"});
  ExperimentConfig cfg;

  const json& dom = require(root, "config", "domain");
  check_keys(dom, "domain", {"lengths", "cells"});
  cfg.domain.lengths = pair_of_numbers(require(dom, "domain", "lengths"), "domain.lengths");
  const auto cells = pair_of_numbers(require(dom, "domain", "cells"), "domain.cells");
  for (int a = 0; a < 2; ++a) {
    if (cells[a] != std::floor(cells[a]) || cells[a] < 1) {
      config_error("domain.cells must hold positive integers");
    }
    cfg.domain.cells[a] = static_cast<int>(cells[a]);
  }
  cfg.domain.validate();

  const json& params = require(root, "config", "params");
  check_keys(params, "params", {"alpha", "beta", "gamma", "delta", "chi", "xi", "rho", "dim"});
  cfg.params.alpha = number_at(params, "params", "alpha");
  cfg.params.beta = number_at(params, "params", "beta");
  cfg.params.gamma = number_at(params, "params", "gamma");
  cfg.params.delta = number_at(params, "params", "delta");
  cfg.params.chi = number_at(params, "params", "chi");
  cfg.params.xi = number_at(params, "params", "xi");
  cfg.params.rho = number_at(params, "params", "rho");
  optional_number(params, "params", "dim", cfg.params.dim);

  cfg.initial = parse_initial(require(root, "config", "initial"));

  if (root.contains("stepper")) {
    const json& s = root.at("stepper");
    check_keys(s, "stepper", {"dt_max", "cfl_safety", "dt_min", "scheme", "t_end",
                              "blowup_threshold", "blowup_factor", "stop_on_steady", "max_steps"});
    optional_number(s, "stepper", "dt_max", cfg.stepper.dt_max);
    optional_number(s, "stepper", "cfl_safety", cfg.stepper.cfl_safety);
    optional_number(s, "stepper", "dt_min", cfg.stepper.dt_min);
    optional_number(s, "stepper", "t_end", cfg.t_end);
    optional_number(s, "stepper", "blowup_threshold", cfg.blowup_threshold);
    optional_number(s, "stepper", "blowup_factor", cfg.blowup_factor);
    optional_number(s, "stepper", "max_steps", cfg.max_steps);
    if (s.contains("scheme")) {
      if (!s.at("scheme").is_string()) config_error("field 'stepper.scheme' must be a string");
      cfg.stepper.scheme = parse_scheme(s.at("scheme").get<std::string>());
    }
    if (s.contains("stop_on_steady")) {
      if (!s.at("stop_on_steady").is_boolean()) config_error("'stepper.stop_on_steady' must be boolean");
      cfg.stop_on_steady = s.at("stop_on_steady").get<bool>();
    }
  }
  cfg.stepper.validate();

  if (root.contains("diagnostics")) {
    const json& d = root.at("diagnostics");
    check_keys(d, "diagnostics", {"p", "sample_every", "c_gn", "c_e", "bounds_p"});
    if (d.contains("p")) cfg.diagnostics.ps = list_of_numbers(d.at("p"), "diagnostics.p");
    optional_number(d, "diagnostics", "sample_every", cfg.diagnostics.sample_every);
    optional_number(d, "diagnostics", "c_gn", cfg.diagnostics.c_gn);
    optional_number(d, "diagnostics", "c_e", cfg.diagnostics.c_e);
    optional_number(d, "diagnostics", "bounds_p", cfg.diagnostics.bounds_p);
    if (cfg.diagnostics.ps.empty()) config_error("'diagnostics.p' must not be empty");
    for (double p : cfg.diagnostics.ps) {
      if (!(p > 1.0)) config_error("'diagnostics.p' entries must exceed 1");
    }
    if (cfg.diagnostics.sample_every < 1) config_error("'diagnostics.sample_every' must be >= 1");
  }

  if (root.contains("output")) {
    const json& o = root.at("output");
    check_keys(o, "output", {"directory", "snapshot_every"});
    if (o.contains("directory")) {
      if (!o.at("directory").is_string()) config_error("'output.directory' must be a string");
      cfg.output_dir = o.at("directory").get<std::string>();
    }
    optional_number(o, "output", "snapshot_every", cfg.snapshot_every);
  }

  if (root.contains("sweep")) cfg.sweep = parse_sweep(root.at("sweep"));
  optional_number(root, "config", "workers", cfg.workers);
  if (cfg.workers < 1) config_error("'workers' must be >= 1");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  ExperimentConfig cfg;
  try {
    cfg = parse_config(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
  if (cfg.initial.kind == InitialData::Kind::FromFile) {
    std::filesystem::path p(cfg.initial.path);
    if (p.is_relative()) cfg.initial.path = (path.parent_path() / p).string();
  }
  return cfg;
}

void apply_axis_value(ExperimentConfig& cfg, std::string_view axis, double value) {
  auto& p = cfg.params;
  if (axis == "alpha") p.alpha = value;
  else if (axis == "beta") p.beta = value;
  else if (axis == "gamma") p.gamma = value;
  else if (axis == "delta") p.delta = value;
  else if (axis == "chi") p.chi = value;
  else if (axis == "xi") p.xi = value;
  else if (axis == "rho") p.rho = value;
  else if (axis == "mass") cfg.initial.mass = value;
  else config_error("unknown sweep axis '" + std::string(axis) + "'");
}

BoundsReport bounds_for_config(const ExperimentConfig& cfg, std::optional<double> p) {
  const InitialField init = build_initial_data(cfg.initial, cfg.domain);
  BoundsInputs in;
  in.params = cfg.params;
  in.domain = cfg.domain;
  in.mass = init.mass;
  in.p = p.value_or(cfg.diagnostics.bounds_p.value_or(default_exponent(cfg.params.dim)));
  in.c_gn = cfg.diagnostics.c_gn;
  in.c_e = cfg.diagnostics.c_e;
  return compute_bounds(in);
}

namespace {

json bounds_to_json(const BoundsReport& r) {
  json j;
  j["p"] = r.p;
  j["n"] = r.n;
  j["mass"] = r.mass;
  j["omega_volume"] = r.omega_volume;
  j["theta"] = r.theta;
  j["c1"] = r.c1;
  j["sigma"] = r.sigma;
  j["c_hat"] = r.c_hat;
  j["eta"] = r.eta;
  j["c_e"] = r.c_e;
  j["c_tilde"] = r.c_tilde;
  j["cbar"] = r.cbar;
  j["c_gn"] = r.c_gn;
  j["c_star"] = r.c_star;
  j["c_star_total"] = r.c_star_total;
  j["critical_mass"] = r.critical_mass ? json(*r.critical_mass) : json(nullptr);
  j["c_gn_source"] = r.c_gn_source;
  j["c_e_source"] = r.c_e_source;
  json prov = json::object();
  for (const auto& [k, v] : r.provenance) prov[k] = std::string(to_string(v));
  j["provenance"] = prov;
  return j;
}

std::string snapshot_name(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "u_%08ld.csv", step);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  os << text;
}

void write_diagnostics_plot(const std::filesystem::path& path,
                            const std::vector<DiagnosticsRecord>& series) {
  static const char* colors[] = {"#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};
  std::vector<svg::Series> lines;
  svg::Series umax{"u_max", {}, {}, "#d62728"};
  for (const auto& r : series) {
    umax.x.push_back(r.t);
    umax.y.push_back(r.u_max);
  }
  lines.push_back(umax);
  if (!series.empty()) {
    for (std::size_t k = 0; k < series.front().ps.size(); ++k) {
      char label[32];
      std::snprintf(label, sizeof label, "E_%g", series.front().ps[k]);
      svg::Series s{label, {}, {}, colors[k % 5]};
      for (const auto& r : series) {
        s.x.push_back(r.t);
        s.y.push_back(r.energy[k]);
      }
      lines.push_back(std::move(s));
    }
  }
  svg::write(path, {"Energies and sup norm", "t", "value (log scale)", true}, lines);
}

}  // namespace

std::string bounds_report_json(const BoundsReport& report) {
  return bounds_to_json(report).dump(2) + "\n";
}

SimulationOutcome simulate(const ExperimentConfig& cfg) {
  const auto wall_start = std::chrono::steady_clock::now();
  validate_params(cfg.params);
  cfg.stepper.validate();
  const InitialField init = build_initial_data(cfg.initial, cfg.domain);

  SimulationOutcome out;
  out.regime = classify_regime(cfg.params, init.mass);

  std::vector<double> ps = cfg.diagnostics.ps;
  if (cfg.params.rho < 1.0) {
    out.bounds = bounds_for_config(cfg);
    // dEdt and rhs_bound track the bounds exponent, which must come first.
    auto it = std::find(ps.begin(), ps.end(), out.bounds->p);
    if (it != ps.end()) ps.erase(it);
    ps.insert(ps.begin(), out.bounds->p);
  }

  std::filesystem::create_directories(cfg.output_dir / "snapshots");

  Stepper stepper(cfg.domain, cfg.params, cfg.stepper);
  SimState state0 = stepper.initial_state(init.u);

  RunOptions opts;
  opts.t_end = cfg.t_end;
  opts.blowup_threshold = cfg.blowup_threshold;
  opts.blowup_factor = cfg.blowup_factor;
  opts.stop_on_steady = cfg.stop_on_steady;
  opts.max_steps = cfg.max_steps;
  opts.sample_every = cfg.diagnostics.sample_every;
  opts.ps = ps;
  opts.bounds = out.bounds ? &*out.bounds : nullptr;

  StepObserver observer;
  if (cfg.snapshot_every > 0) {
    write_field_csv(state0.u, cfg.output_dir / "snapshots" / snapshot_name(0));
    observer = [&](const SimState& s) {
      if (s.step % cfg.snapshot_every == 0) {
        write_field_csv(s.u, cfg.output_dir / "snapshots" / snapshot_name(s.step));
      }
    };
  }

  out.result = run(state0, stepper, opts, observer);
  const RunResult& res = out.result;
  const SimState& fin = res.final_state;
  out.exit_code = fin.status == RunStatus::BlowupSuspected ? kExitBlowup : kExitOk;

  write_diagnostics_csv(res.series, cfg.output_dir / "diagnostics.csv");
  write_field_csv(fin.u, cfg.output_dir / "snapshots" / "u_final.csv");
  write_diagnostics_plot(cfg.output_dir / "diagnostics.svg", res.series);
  if (out.bounds) write_text(cfg.output_dir / "bounds.json", bounds_report_json(*out.bounds));

  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

  json summary;
  summary["status"] = std::string(to_string(fin.status));
  summary["exit_code"] = out.exit_code;
  summary["regime"] = std::string(to_string(out.regime.regime));
  summary["regime_prediction"] = std::string(to_string(out.regime.prediction));
  summary["theorem_applies"] = out.regime.theorem_applies;
  summary["critical_mass"] = out.regime.threshold ? json(*out.regime.threshold) : json(nullptr);
  summary["t_final"] = fin.t;
  summary["steps"] = fin.step;
  summary["initial_mass"] = res.initial_mass;
  const double final_mass = integrate(fin.u);
  summary["final_mass"] = final_mass;
  summary["conservation_drift"] = std::abs(final_mass - res.initial_mass) / res.initial_mass;
  summary["max_conservation_drift"] = res.max_mass_drift;
  summary["worst_positivity_ratio"] = res.worst_positivity;
  summary["final_u_max"] = fin.u.max();
  summary["blowup_threshold"] = res.blowup_threshold;
  summary["blowup_proxy"] =
      "u_max > blowup_threshold, dt below dt_min, or non-finite update; a finite grid caps u_max "
      "near m/h^2, so this is a proxy for unbounded growth";
  summary["dt_clamped"] = res.dt_clamped;
  summary["non_finite"] = res.non_finite;
  json energies = json::object();
  if (!res.series.empty()) {
    const auto& last = res.series.back();
    for (std::size_t k = 0; k < last.ps.size(); ++k) {
      char key[32];
      std::snprintf(key, sizeof key, "%g", last.ps[k]);
      energies[key] = last.energy[k];
    }
  }
  summary["final_E"] = energies;
  if (out.bounds && res.series.size() >= 2) {
    const auto& b = *out.bounds;
    const auto ineq = check_energy_inequality(res.series, b.p, b.cbar);
    const auto absorb = check_absorptive_bound(res.series, b.p, res.series.front().energy.front(),
                                               b.c_star_total, false);
    summary["energy_inequality"] = {{"p", b.p},
                                    {"pairs", ineq.pairs},
                                    {"satisfied", ineq.satisfied},
                                    {"fraction", ineq.fraction()},
                                    {"kind", "consistency check, not a proof"}};
    summary["absorptive_bound"] = {{"ratio", absorb.ratio},
                                   {"bound", absorb.bound},
                                   {"within", absorb.within},
                                   {"constants", "estimated-constant"}};
  }
  summary["wall_seconds"] = out.wall_seconds;
  write_text(cfg.output_dir / "summary.json", summary.dump(2) + "\n");
  return out;
}

std::vector<SweepPoint> sweep(const ExperimentConfig& cfg) {
  if (cfg.sweep.empty()) config_error("config has no sweep block");
  std::size_t total = 1;
  for (const auto& axis : cfg.sweep) {
    if (axis.values.empty()) config_error("sweep axis '" + axis.name + "' has no values");
    ExperimentConfig probe = cfg;
    apply_axis_value(probe, axis.name, axis.values.front());
    total *= axis.values.size();
  }

  int workers = cfg.workers;
  if (const char* env = std::getenv("SIM_WORKERS")) {
    try {
      workers = std::stoi(env);
    } catch (const std::exception&) {
      config_error(std::string("SIM_WORKERS is not an integer: ") + env);
    }
  }
  workers = std::clamp<int>(workers, 1, static_cast<int>(total));

  std::vector<SweepPoint> points(total);
  std::vector<ExperimentConfig> configs(total, cfg);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    // Last axis varies fastest.
    for (std::size_t a = cfg.sweep.size(); a-- > 0;) {
      const auto& axis = cfg.sweep[a];
      const double v = axis.values[rem % axis.values.size()];
      rem /= axis.values.size();
      points[idx].values.insert(points[idx].values.begin(), v);
      apply_axis_value(configs[idx], axis.name, v);
    }
    char dir[32];
    std::snprintf(dir, sizeof dir, "point_%03zu", idx);
    configs[idx].output_dir = cfg.output_dir / dir;
    configs[idx].sweep.clear();
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      SweepPoint& pt = points[idx];
      try {
        const auto outcome = simulate(configs[idx]);
        pt.prediction = outcome.regime.prediction;
        pt.observed = outcome.exit_code == kExitBlowup ? "blowup" : "bounded";
      } catch (const std::exception& e) {
        pt.observed = "failed";
        pt.error = e.what();
        try {
          const auto init = build_initial_data(configs[idx].initial, configs[idx].domain);
          pt.prediction = classify_regime(configs[idx].params, init.mass).prediction;
        } catch (const std::exception&) {
          pt.prediction = Prediction::Indeterminate;
        }
      }
      if (pt.observed == "failed" || pt.prediction == Prediction::Indeterminate) {
        pt.agreement = "-";
      } else {
        pt.agreement = std::string(to_string(pt.prediction)) == pt.observed ? "1" : "0";
      }
    }
  };
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  pool.clear();

  std::filesystem::create_directories(cfg.output_dir);
  std::ofstream os(cfg.output_dir / "regime_map.csv");
  if (!os) throw Error(ErrorCode::IoError, "cannot write regime_map.csv");
  for (const auto& axis : cfg.sweep) os << axis.name << ',';
  os << "classifier_prediction,observed_outcome,agreement\n";
  char buf[32];
  for (const auto& pt : points) {
    for (double v : pt.values) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      os << std::string_view(buf, res.ptr - buf) << ',';
    }
    os << to_string(pt.prediction) << ',' << pt.observed << ',' << pt.agreement << '\n';
  }

  auto level = [](std::string_view outcome) {
    if (outcome == "blowup") return 1.0;
    if (outcome == "bounded") return 0.0;
    return 0.5;
  };
  svg::Series predicted{"classifier prediction", {}, {}, "#1f77b4", true};
  svg::Series observed{"observed outcome", {}, {}, "#d62728", true};
  for (const auto& pt : points) {
    predicted.x.push_back(pt.values.front());
    predicted.y.push_back(level(to_string(pt.prediction)) + 0.03);
    observed.x.push_back(pt.values.front());
    observed.y.push_back(level(pt.observed) - 0.03);
  }
  svg::write(cfg.output_dir / "regime_map.svg",
             {"Regime map: 0 = bounded, 1 = blow-up, 0.5 = indeterminate/failed",
              cfg.sweep.front().name, "outcome"},
             {predicted, observed});
  return points;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto o = simulate(cfg);
    const auto& fin = o.result.final_state;
    out << "status " << to_string(fin.status) << " at t=" << fin.t << " after " << fin.step
        << " steps; regime " << to_string(o.regime.regime) << "; outputs in "
        << cfg.output_dir.string() << "\n";
    return o.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_bounds(const ExperimentConfig& cfg, std::optional<double> p, std::ostream& out,
               std::ostream& err) {
  try {
    if (p && !(*p > 1.0)) {
      throw Error(ErrorCode::DomainError, "--p must exceed 1");
    }
    out << bounds_report_json(bounds_for_config(cfg, p));
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::RhoNotSublinear) {
      err << "the L^p bounds need sublinear production (0 < rho < 1)\n";
    }
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto points = sweep(cfg);
    int failed = 0;
    for (const auto& pt : points) {
      if (pt.observed == "failed") {
        ++failed;
        err << "point failed: " << pt.error << "\n";
      }
    }
    out << points.size() << " sweep points, " << failed << " failed; map in "
        << (cfg.output_dir / "regime_map.csv").string() << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_classify(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto init = build_initial_data(cfg.initial, cfg.domain);
    const auto info = classify_regime(cfg.params, init.mass);
    json j;
    j["mass"] = init.mass;
    j["regime"] = std::string(to_string(info.regime));
    j["prediction"] = std::string(to_string(info.prediction));
    j["theorem_applies"] = info.theorem_applies;
    j["critical_mass"] = info.threshold ? json(*info.threshold) : json(nullptr);
    out << j.dump(2) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace chemo
