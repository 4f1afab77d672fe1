// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Output directories go under $CHEMO_ACCEPTANCE_DIR (default: system temp).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chemo/bounds.hpp"
#include "chemo/diagnostics.hpp"
#include "chemo/elliptic.hpp"
#include "chemo/error.hpp"
#include "chemo/experiment.hpp"
#include "oracles/oracles.hpp"

using namespace chemo;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s | %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path root_dir() {
  const char* env = std::getenv("CHEMO_ACCEPTANCE_DIR");
  fs::path p = env ? fs::path(env) : fs::temp_directory_path() / "chemo_acceptance";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Bump bump(double cx, double cy, double width) { return Bump{{cx, cy}, width, 1.0}; }

ExperimentConfig conservation_config(const fs::path& out) {
  ExperimentConfig c;
  c.domain = {{1.0, 1.0}, {128, 128}};
  c.params = ModelParams{.rho = 0.5};
  c.initial.kind = InitialData::Kind::GaussianBump;
  c.initial.bumps = {bump(0.5, 0.5, 0.1)};
  c.initial.mass = 10.0;
  c.stepper = {.dt_max = 1e-3};
  c.t_end = 1e9;
  c.max_steps = 10000;
  c.stop_on_steady = false;
  c.diagnostics.sample_every = 100;
  c.diagnostics.ps = {2.0};
  c.output_dir = out;
  return c;
}

ExperimentConfig sublinear_config(const fs::path& out) {
  ExperimentConfig c;
  c.domain = {{4.0, 4.0}, {128, 128}};
  c.params = ModelParams{.chi = 5.0, .xi = 0.1, .rho = 0.5};
  c.initial.kind = InitialData::Kind::GaussianBump;
  c.initial.bumps = {bump(2.0, 2.0, 0.2)};
  c.initial.mass = 800.0;
  c.stepper = {.dt_max = 1e-3, .scheme = Scheme::ImexDiffusion};
  c.t_end = 4.0;
  c.stop_on_steady = false;
  c.diagnostics.sample_every = 20;
  c.diagnostics.ps = {2.0};  // the bounds exponent 3n/4 = 1.5 is prepended
  c.output_dir = out;
  return c;
}

ExperimentConfig critical_config(const fs::path& out, double mass_factor) {
  ExperimentConfig c;
  c.domain = {{1.0, 1.0}, {128, 128}};
  c.params = ModelParams{.chi = 2.0, .xi = 1.0, .rho = 1.0};
  c.initial.kind = InitialData::Kind::GaussianBump;
  c.initial.bumps = {bump(0.5, 0.5, 0.05)};
  c.initial.mass = mass_factor * 4 * std::numbers::pi;
  c.stepper = {.dt_max = 1e-3};
  c.t_end = 0.05;
  c.blowup_factor = 500.0;
  c.stop_on_steady = false;
  c.diagnostics.sample_every = 50;
  c.output_dir = out;
  return c;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double cosine_amplitude(const Field& u) {
  const DomainSpec& dom = u.domain();
  const double mean = integrate(u) / dom.volume();
  double num = 0.0, den = 0.0;
  for (int j = 0; j < dom.ny(); ++j) {
    for (int i = 0; i < dom.nx(); ++i) {
      const double c = std::cos(std::numbers::pi * dom.x_center(i) / dom.lengths[0]);
      num += (u(i, j) - mean) * c;
      den += c * c;
    }
  }
  return num / den;
}

std::vector<double> positivity_log;

// --- 1 and 9 ---------------------------------------------------------------
void conservation_and_determinism(const fs::path& root) {
  const ExperimentConfig a = conservation_config(root / "c1_run_a");
  const auto t0 = std::chrono::steady_clock::now();
  const SimulationOutcome ra = simulate(a);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const long steps = ra.result.final_state.step;
  const double drift = ra.result.max_mass_drift;
  positivity_log.push_back(ra.result.worst_positivity);
  report(1, "mass conservation, 128^2, rho=0.5, 1e4 steps",
         steps == 10000 && drift <= 1e-10 && secs < 60.0,
         fmt("steps=%ld max relative drift=%.3e (tol 1e-10) runtime=%.1fs (target < 60s)", steps, drift, secs));

  const SimulationOutcome rb = simulate(conservation_config(root / "c1_run_b"));
  const std::string da = slurp(a.output_dir / "diagnostics.csv");
  const std::string db = slurp(root / "c1_run_b" / "diagnostics.csv");
  positivity_log.push_back(rb.result.worst_positivity);
  report(9, "determinism, byte-identical diagnostics CSV", !da.empty() && da == db,
         fmt("%zu bytes vs %zu bytes, identical=%s", da.size(), db.size(), da == db ? "yes" : "no"));
}

// --- 2 ---------------------------------------------------------------------
void elliptic() {
  double eig_err = 0.0;
  for (auto cells : {std::array<int, 2>{64, 64}, std::array<int, 2>{128, 64}, std::array<int, 2>{96, 96}}) {
    const DomainSpec dom{{cells[0] / 64.0, cells[1] / 64.0}, cells};
    HelmholtzSolver solver(dom);
    for (int k = 0; k <= 3; ++k) {
      for (int l = 0; l <= 3; ++l) {
        for (double kappa : {0.1, 1.0, 10.0}) {
          Field f(dom);
          for (int j = 0; j < dom.ny(); ++j)
            for (int i = 0; i < dom.nx(); ++i)
              f(i, j) = std::cos(k * std::numbers::pi * dom.x_center(i) / dom.lengths[0]) *
                        std::cos(l * std::numbers::pi * dom.y_center(j) / dom.lengths[1]);
          const double lam = neumann_eigenvalue(k, dom.h(), dom.lengths[0]) +
                             neumann_eigenvalue(l, dom.h(), dom.lengths[1]);
          const Field phi = solver.solve(f, kappa);
          for (std::size_t q = 0; q < f.size(); ++q)
            eig_err = std::max(eig_err, std::abs(phi[q] - f[q] / (kappa + lam)));
        }
      }
    }
  }

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0), coef(0.2, 5.0), rho(0.1, 1.0);
  double dense_err = 0.0;
  for (auto cells : {std::array<int, 2>{32, 32}, std::array<int, 2>{32, 16}}) {
    const DomainSpec dom{{cells[0] / 32.0, cells[1] / 32.0}, cells};
    for (double kappa : {0.05, 0.7, 20.0}) {
      Field f(dom);
      for (double& x : f.values()) x = 4 * unit(rng);
      const Field phi = solve_helmholtz({f, kappa});
      const auto ref = oracle::dense_solve(dom.nx(), dom.ny(), dom.h(), kappa, f.values());
      for (std::size_t q = 0; q < ref.size(); ++q) dense_err = std::max(dense_err, std::abs(phi[q] - ref[q]));
    }
  }

  double id_err = 0.0;
  const DomainSpec dom{{1.0, 1.0}, {64, 64}};
  HelmholtzSolver solver(dom);
  for (int trial = 0; trial < 100; ++trial) {
    const ModelParams p{.alpha = coef(rng), .beta = coef(rng), .gamma = coef(rng), .delta = coef(rng), .rho = rho(rng)};
    Field u(dom);
    for (double& x : u.values()) x = 10 * unit(rng);
    const Signals s = solve_signals(u, p, solver);
    std::vector<double> up(u.size());
    for (std::size_t q = 0; q < u.size(); ++q) up[q] = std::pow(u[q], p.rho);
    const double h2 = dom.h() * dom.h();
    const double iv = p.alpha / p.beta * h2 * oracle::kahan_sum(up);
    const double iw = p.gamma / p.delta * h2 * oracle::kahan_sum(u.values());
    id_err = std::max({id_err, std::abs(integrate(s.v) - iv) / iv, std::abs(integrate(s.w) - iw) / iw});
  }
  report(2, "elliptic correctness", eig_err <= 1e-12 && dense_err <= 1e-9 && id_err <= 1e-12,
         fmt("eigenfunction max err=%.2e (tol 1e-12), dense 32^2 inf-norm err=%.2e (tol 1e-9), "
             "integral identities max rel err over 100 fields=%.2e (tol 1e-12)",
             eig_err, dense_err, id_err));
}

// --- 3 ---------------------------------------------------------------------
void heat() {
  const DomainSpec dom{{1.0, 1.0}, {128, 128}};
  const ModelParams p{.chi = 0.0, .xi = 0.0};
  Field u0(dom);
  for (int j = 0; j < dom.ny(); ++j)
    for (int i = 0; i < dom.nx(); ++i) u0(i, j) = 1.0 + std::cos(std::numbers::pi * dom.x_center(i));
  const double lam = neumann_eigenvalue(1, dom.h(), 1.0);

  auto decay = [&](double dt_max, double& dt_used) {
    Stepper st(dom, p, {.dt_max = dt_max, .dt_min = 1e-14});
    SimState s = st.initial_state(u0);
    const double a0 = cosine_amplitude(s.u);
    for (int n = 0; n < 100; ++n) {
      dt_used = st.choose_dt(s).dt;
      s = st.step(s);
      positivity_log.push_back(s.u.min() / s.u.max());
    }
    return -std::log(cosine_amplitude(s.u) / a0) / s.t;
  };
  double dt_cfl = 0.0, dt_small = 0.0;
  const double rate_cfl = decay(1.0, dt_cfl);
  const double rate_small = decay(1e-8, dt_small);
  const double discrete_rate = -std::log1p(-dt_cfl * lam) / dt_cfl;
  const double e1 = std::abs(rate_cfl - discrete_rate) / discrete_rate;
  const double e2 = std::abs(rate_small - lam) / lam;
  report(3, "heat-equation reduction (chi=xi=0), 100 steps", e1 <= 1e-6 && e2 <= 1e-6,
         fmt("CFL dt=%.3e: rate vs fully discrete rate rel err=%.2e; dt=%.0e: rate vs lambda_h=%.6f rel err=%.2e (tol 1e-6)",
             dt_cfl, e1, dt_small, lam, e2));
}

// --- 4, 7 ------------------------------------------------------------------
void sublinear(const fs::path& root) {
  const ExperimentConfig cfg = sublinear_config(root / "c4_sublinear");
  const SimulationOutcome out = simulate(cfg);
  const RunResult& r = out.result;
  positivity_log.push_back(r.worst_positivity);
  const double t_end = cfg.t_end;

  std::vector<double> e2_tail, umax_tail;
  double e2_max = 0.0, umax_max = 0.0, umax_transient = 0.0;
  for (const auto& rec : r.series) {
    if (rec.t <= 0.1 * t_end) umax_transient = std::max(umax_transient, rec.u_max);
    if (rec.t >= 0.5 * t_end) {
      e2_tail.push_back(rec.energy_for(2.0));
      umax_tail.push_back(rec.u_max);
      e2_max = std::max(e2_max, rec.energy_for(2.0));
      umax_max = std::max(umax_max, rec.u_max);
    }
  }
  const double e2_ratio = e2_max / median(e2_tail);
  const double umax_ratio = umax_max / median(umax_tail);
  const bool never_blowup = r.final_state.status != RunStatus::BlowupSuspected;
  const bool reached = std::abs(r.final_state.t - t_end) <= 1e-9 * t_end;
  report(4, "sublinear boundedness, rho=0.5 chi=5 xi=0.1 m=800 on [0,4]^2 at 128^2",
         never_blowup && reached && e2_ratio <= 1.05 && umax_ratio <= 1.05,
         fmt("status=%s t=%.3f, final half: max E_2/median E_2=%.5f, max u/median u_max=%.5f (tol 1.05); "
             "u_max peak=%.4g vs mean %.4g",
             std::string(to_string(r.final_state.status)).c_str(), r.final_state.t, e2_ratio, umax_ratio,
             umax_max, cfg.initial.mass.value() / cfg.domain.volume()));

  const BoundsReport& b = *out.bounds;
  const double e0 = r.series.front().energy_for(b.p);
  const AbsorptiveReport abs = check_absorptive_bound(r.series, b.p, e0, b.c_star_total, false);
  const InequalityReport ineq = check_energy_inequality(r.series, b.p, b.cbar);
  report(7, "absorptive-bound consistency, p=3n/4=1.5",
         abs.ratio <= 1.0 && ineq.passes(0.95),
         fmt("max E/max{E0,c*}=%.3e (<= 1), inequality satisfied on %d/%d pairs (%.1f%%, need 95%%); "
             "constants: c_gn=%.4g [%s, %s], c_e=%.4g [%s, %s], c_star_total=%.3e [%s]",
             abs.ratio, ineq.satisfied, ineq.pairs, 100 * ineq.fraction(), b.c_gn,
             std::string(to_string(b.provenance.at("c_gn"))).c_str(), b.c_gn_source.c_str(), b.c_e,
             std::string(to_string(b.provenance.at("c_e"))).c_str(), b.c_e_source.c_str(), b.c_star_total,
             std::string(to_string(b.provenance.at("c_star_total"))).c_str()));
}

// --- 5 ---------------------------------------------------------------------
void critical(const fs::path& root) {
  const SimulationOutcome sub = simulate(critical_config(root / "c5_subcritical", 0.5));
  const SimulationOutcome sup = simulate(critical_config(root / "c5_supercritical", 3.0));
  positivity_log.push_back(sub.result.worst_positivity);
  const bool sub_ok = sub.exit_code == kExitOk && sub.result.final_state.status != RunStatus::BlowupSuspected;
  const bool sup_ok = sup.exit_code == kExitBlowup && sup.result.final_state.t < 0.05;
  report(5, "critical-mass contrast, rho=1, chi*alpha-xi*gamma=1, m=0.5*4pi vs 3*4pi",
         sub_ok && sup_ok,
         fmt("sub: status=%s exit=%d max u=%.4g; super: status=%s exit=%d at t=%.4g, u_max=%.4g > %.4g "
             "(proxy threshold 500*m/|Omega|; 128^2 grid bounds u_max by %.4g*m/|Omega|)",
             std::string(to_string(sub.result.final_state.status)).c_str(), sub.exit_code,
             sub.result.final_state.u.max(), std::string(to_string(sup.result.final_state.status)).c_str(),
             sup.exit_code, sup.result.final_state.t, sup.result.final_state.u.max(), sup.result.blowup_threshold,
             128.0 * 128.0));
}

// --- 6 ---------------------------------------------------------------------
void constants() {
  using oracle::hp;
  const double th = theta(2.0, 2), c1v = c1(2.0, 0.5, 1, 1, 1, 1, 1.0), cs = c_star(2.0, 2, 1.0, 1.0);
  bool worked = oracle::rel(th, hp("0.5")) <= 1e-12 &&
                oracle::rel(c1v, hp(1) / 6 / boost::multiprecision::pow(hp("0.4"), 5)) <= 1e-12 &&
                oracle::rel(cs, hp("2.5")) <= 1e-12;

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> pd(1.05, 3.5), rd(0.05, 0.95), cd(0.2, 5.0), od(0.1, 10.0),
      md(0.05, 50.0), gd(0.1, 10.0);
  double worst = 0.0;
  int done = 0, overflow = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double p = pd(rng), rho = rd(rng), alpha = cd(rng), chi = cd(rng), gamma = cd(rng), xi = cd(rng),
                 delta = cd(rng), omega = od(rng), m = md(rng), cg = gd(rng), ce = gd(rng);
    const int n = 2 + static_cast<int>(rng() % 2);
    try {
      const double a = c1(p, rho, alpha, chi, gamma, xi, omega);
      const EhrlingSchedule s = ehrling_schedule(p, gamma, xi, delta, ce);
      const double c = c_star(p, n, m, cg);
      const CbarTotal t = cbar_and_total(a, s.c_tilde, m, p, c);
      const hp P(p), G(gamma), Xi(xi), D(delta), M(m);
      const hp sig = oracle::sigma(P, G, Xi), ch = oracle::c_hat(P, G, Xi, D), k = oracle::k_factor(P, G, ch);
      const hp ct = oracle::c_tilde(P, G, D, ch, sig, k, hp(ce));
      const hp c1o = oracle::c1(P, hp(rho), hp(alpha), hp(chi), G, Xi, hp(omega));
      const hp cso = oracle::c_star(P, n, M, hp(cg));
      const hp cbar = c1o + ct * boost::multiprecision::pow(M, P + 1);
      worst = std::max({worst, oracle::rel(theta(p, n), oracle::theta(P, n)), oracle::rel(a, c1o),
                        oracle::rel(s.sigma, sig), oracle::rel(s.c_hat, ch),
                        oracle::rel(s.eta, oracle::eta_by_bisection(sig, k)), oracle::rel(s.c_tilde, ct),
                        oracle::rel(c, cso), oracle::rel(t.cbar, cbar), oracle::rel(t.total, cbar + cso)});
      ++done;
    } catch (const Error&) {
      ++overflow;
    }
  }
  report(6, "constants pipeline vs 50-digit oracle", worked && done == 1000 && worst <= 1e-12,
         fmt("worked values theta(2,2)=%.17g c1=%.17g c*=%.17g; %d/1000 random tuples evaluated, "
             "worst rel err=%.2e (tol 1e-12)",
             th, c1v, cs, done, worst));
}

}  // namespace

int main() {
  const fs::path root = root_dir();
  std::printf("acceptance output under %s\n", root.string().c_str());
  try {
    conservation_and_determinism(root);
    elliptic();
    heat();
    sublinear(root);
    critical(root);
    constants();
    const double worst = *std::min_element(positivity_log.begin(), positivity_log.end());
    report(8, "positivity in every non-blow-up acceptance run", worst >= -1e-13,
           fmt("min over runs and steps of min(u)/max(u)=%.3e (tol -1e-13), %zu runs/steps logged", worst,
               positivity_log.size()));
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
