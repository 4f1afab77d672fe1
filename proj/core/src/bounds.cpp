#include "chemo/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "chemo/error.hpp"

namespace chemo {

namespace {

constexpr double kMaxLog = 709.0;

double checked_exp(double log_value, const char* what) {
  if (!(log_value <= kMaxLog)) {
    throw Error(ErrorCode::ConstantOverflow, std::string(what) + " overflows double precision");
  }
  return std::exp(log_value);
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::DomainError, std::string(name) + " must be positive and finite");
  }
}

}  // namespace

double theta(double p, int n) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::DomainError, "theta needs p > 1");
  if (n < 2) throw Error(ErrorCode::DomainError, "theta needs n >= 2");
  const double th = (0.5 * p - 0.5) / (0.5 * p + 1.0 / n - 0.5);
  if (!(th > 0.0 && th < 1.0)) throw Error(ErrorCode::DomainError, "theta left (0, 1)");
  return th;
}

double c1(double p, double rho, double alpha, double chi, double gamma, double xi,
          double omega_volume) {
  if (!(p > 1.0)) throw Error(ErrorCode::DomainError, "c1 needs p > 1");
  if (!(rho > 0.0)) throw Error(ErrorCode::RhoOutOfRange, "rho must be positive");
  if (!(rho < 1.0)) {
    throw Error(ErrorCode::RhoNotSublinear,
                "c1 requires sublinear production rho < 1 (exponent (p+rho)/(rho-1) diverges)");
  }
  require_positive(alpha, "alpha");
  require_positive(chi, "chi");
  require_positive(gamma, "gamma");
  require_positive(xi, "xi");
  require_positive(omega_volume, "|Omega|");
  const double log_prefactor = std::log(alpha * chi * (p - 1.0) * (1.0 - rho) / (p + 1.0));
  const double base = (p + 1.0) * gamma * xi / ((p + rho) * 3.0 * alpha * chi);
  const double exponent = (p + rho) / (rho - 1.0);
  return checked_exp(log_prefactor + exponent * std::log(base) + std::log(omega_volume), "c1");
}

namespace {

struct ScheduleCore {
  double sigma, c_hat, k, eta;
};

ScheduleCore schedule_core(double p, double gamma, double xi, double delta) {
  if (!(p > 1.0)) throw Error(ErrorCode::DomainError, "schedule needs p > 1");
  require_positive(gamma, "gamma");
  require_positive(xi, "xi");
  require_positive(delta, "delta");
  ScheduleCore s{};
  s.sigma = gamma * xi * (p - 1.0) / 3.0;
  const double log_c_hat = std::log(xi * delta * (p - 1.0) / (p + 1.0)) -
                           p * std::log((p + 1.0) * gamma / (3.0 * p * delta));
  s.c_hat = checked_exp(log_c_hat, "c_hat");
  s.k = checked_exp((p + 1.0) * std::log(gamma * (p + 1.0)) + log_c_hat -
                        (p + 1.0) * std::log(4.0) - std::log(p),
                    "K");
  s.eta = s.sigma / (2.0 * s.sigma + s.k);
  if (!(s.eta > 0.0 && s.eta < 0.5)) {
    throw Error(ErrorCode::EtaOutOfRange, "inverted eta = " + std::to_string(s.eta));
  }
  return s;
}

}  // namespace

double ehrling_eta(double p, double gamma, double xi, double delta) {
  return schedule_core(p, gamma, xi, delta).eta;
}

EhrlingSchedule ehrling_schedule(double p, double gamma, double xi, double delta,
                                 double c_e_at_eta) {
  return ehrling_schedule(p, gamma, xi, delta, [c_e_at_eta](double) { return c_e_at_eta; });
}

EhrlingSchedule ehrling_schedule(double p, double gamma, double xi, double delta,
                                 const std::function<double(double)>& c_e) {
  const ScheduleCore core = schedule_core(p, gamma, xi, delta);
  EhrlingSchedule s;
  s.sigma = core.sigma;
  s.c_hat = core.c_hat;
  s.k = core.k;
  s.eta = core.eta;
  s.c_e = c_e(core.eta);
  if (!(s.c_e > 0.0) || !std::isfinite(s.c_e)) {
    throw Error(ErrorCode::DomainError, "Ehrling constant must be finite and positive");
  }
  const double ratio_pow = checked_exp((p + 1.0) * std::log(gamma / delta), "(gamma/delta)^(p+1)");
  s.c_tilde = ratio_pow * (s.c_hat + 2.0 * s.sigma / s.k) * s.c_e;
  return s;
}

double c_star(double p, int n, double m, double c_gn) {
  const double th = theta(p, n);
  require_positive(m, "m");
  require_positive(c_gn, "C_GN");
  const double log_base = std::log(2.0 * (p - 1.0) / (p * th * c_gn * c_gn));
  const double log_mp = p * std::log(m);
  const double inner = checked_exp(std::log(1.0 - th) + log_mp + th / (th - 1.0) * log_base,
                                   "c_star inner term");
  return 2.0 * checked_exp(log_mp + 2.0 * std::log(c_gn), "c_star") * (inner + 1.0);
}

CbarTotal cbar_and_total(double c1_value, double c_tilde, double m, double p,
                         double c_star_value) {
  CbarTotal r;
  r.cbar = c1_value + c_tilde * checked_exp((p + 1.0) * std::log(m), "m^(p+1)");
  r.total = c_star_value + r.cbar;
  return r;
}

std::optional<double> critical_mass(double chi, double alpha, double xi, double gamma) {
  const double excess = chi * alpha - xi * gamma;
  if (!(excess > 0.0)) return std::nullopt;
  return 4.0 * std::numbers::pi / excess;
}

// --- estimators -------------------------------------------------------------

std::vector<TestField> make_test_family(const DomainSpec& dom, const FamilyOptions& opts) {
  dom.validate();
  const double lx = dom.lengths[0];
  const double ly = dom.lengths[1];
  const double pi = std::numbers::pi;
  std::vector<TestField> family;
  auto add = [&](std::string name, auto&& fn) {
    Field f(dom);
    for (int j = 0; j < dom.ny(); ++j) {
      for (int i = 0; i < dom.nx(); ++i) f(i, j) = fn(dom.x_center(i), dom.y_center(j));
    }
    family.push_back({std::move(name), std::move(f)});
  };

  add("constant", [](double, double) { return 1.0; });
  for (int k = 0; k <= opts.max_mode; ++k) {
    for (int l = 0; l <= opts.max_mode; ++l) {
      if (k == 0 && l == 0) continue;
      auto mode = [=](double x, double y) { return std::cos(k * pi * x / lx) * std::cos(l * pi * y / ly); };
      const std::string tag = std::to_string(k) + "," + std::to_string(l);
      add("cos(" + tag + ")+1.5", [=](double x, double y) { return 1.5 + mode(x, y); });
      add("|cos(" + tag + ")|", [=](double x, double y) { return std::abs(mode(x, y)); });
    }
  }
  const std::pair<const char*, std::array<double, 2>> centers[] = {
      {"center", {0.5 * lx, 0.5 * ly}}, {"edge", {0.0, 0.5 * ly}}, {"corner", {0.0, 0.0}}};
  const double lmin = std::min(lx, ly);
  for (double w : opts.widths) {
    const double s = w * lmin;
    for (const auto& [where, c] : centers) {
      add(std::string("bump@") + where + ":" + std::to_string(w), [=](double x, double y) {
        const double r2 = (x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]);
        return std::exp(-r2 / (2.0 * s * s));
      });
    }
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> mode_index(0, std::max(1, opts.max_mode + 2));
  for (int r = 0; r < opts.random_members; ++r) {
    struct Term { int k, l; double a; };
    std::vector<Term> terms;
    for (int t = 0; t < 6; ++t) terms.push_back({mode_index(rng), mode_index(rng), amp(rng)});
    auto smooth = [=](double x, double y) {
      double s = 0.0;
      for (const auto& term : terms) {
        s += term.a * std::cos(term.k * pi * x / lx) * std::cos(term.l * pi * y / ly);
      }
      return s;
    };
    add("random#" + std::to_string(r), [=](double x, double y) { return std::abs(smooth(x, y)); });
    add("exp-random#" + std::to_string(r), [=](double x, double y) { return std::exp(2.0 * smooth(x, y)); });
  }
  return family;
}

namespace {

// (integral of |f|^q), valid for 0 < q < 1 where lp_norm_p does not apply.
double power_integral(const Field& f, double q) {
  Field g(f.domain());
  for (std::size_t k = 0; k < f.size(); ++k) g[k] = std::pow(std::abs(f[k]), q);
  return integrate(g);
}

Field absolute(const Field& f) {
  Field g = f;
  for (double& x : g.values()) x = std::abs(x);
  return g;
}

}  // namespace

ConstantEstimate estimate_cgn(const DomainSpec& dom, double p, int n,
                              std::span<const TestField> family) {
  if (n != 2) throw Error(ErrorCode::DomainError, "estimator domain is two-dimensional");
  const double th = theta(p, n);
  const double r = 2.0 / p;
  ConstantEstimate best;
  for (const auto& member : family) {
    if (!(member.f.domain() == dom)) throw Error(ErrorCode::InvalidDomain, "family grid mismatch");
    const Field a = absolute(member.f);
    const double l2 = std::sqrt(lp_norm_p(a, 2.0));
    const double lr = std::pow(power_integral(a, r), 1.0 / r);
    const double grad = std::sqrt(grad_energy(a));
    const double denom = std::pow(grad, th) * std::pow(lr, 1.0 - th) + lr;
    if (!(denom > 0.0)) continue;
    const double ratio = l2 / denom;
    if (ratio > best.value) best = {ratio, member.name};
  }
  return best;
}

ConstantEstimate estimate_cgn(const DomainSpec& dom, double p, int n) {
  const auto family = make_test_family(dom);
  return estimate_cgn(dom, p, n, family);
}

ConstantEstimate estimate_ehrling_ce(const DomainSpec& dom, double eta, double p,
                                     std::span<const TestField> family) {
  if (!(eta > 0.0 && eta < 0.5)) {
    throw Error(ErrorCode::DomainError, "Ehrling estimate needs 0 < eta < 1/2");
  }
  if (!(p > 1.0)) throw Error(ErrorCode::DomainError, "Ehrling estimate needs p > 1");
  const double q = 2.0 / (p + 1.0);
  ConstantEstimate best;
  best.argmax = "none";
  for (const auto& member : family) {
    if (!(member.f.domain() == dom)) throw Error(ErrorCode::InvalidDomain, "family grid mismatch");
    const Field a = absolute(member.f);
    const double l2sq = lp_norm_p(a, 2.0);
    const double gradsq = grad_energy(a);
    const double lq2 = std::pow(power_integral(a, q), 2.0 / q);
    if (!(lq2 > 0.0)) continue;
    const double need = (l2sq - eta * (l2sq + gradsq)) / lq2;
    if (need > best.value) best = {need, member.name};
  }
  return best;
}

ConstantEstimate estimate_ehrling_ce(const DomainSpec& dom, double eta, double p) {
  const auto family = make_test_family(dom);
  return estimate_ehrling_ce(dom, eta, p, family);
}

std::string_view to_string(Provenance p) {
  return p == Provenance::ExactFormula ? "exact-formula" : "estimated-constant";
}

double default_exponent(int n) { return 0.75 * n; }

BoundsReport compute_bounds(const BoundsInputs& in) {
  validate_params(in.params);
  in.domain.validate();
  const int n = in.params.dim;
  BoundsReport r;
  r.p = in.p > 0.0 ? in.p : default_exponent(n);
  r.n = n;
  r.mass = in.mass;
  r.omega_volume = in.domain.volume();
  require_positive(r.mass, "mass");

  const auto& q = in.params;
  r.theta = theta(r.p, n);
  r.c1 = c1(r.p, q.rho, q.alpha, q.chi, q.gamma, q.xi, r.omega_volume);

  std::vector<TestField> family;
  auto lazy_family = [&]() -> std::span<const TestField> {
    if (family.empty()) family = make_test_family(in.domain);
    return family;
  };

  const EhrlingSchedule sched =
      ehrling_schedule(r.p, q.gamma, q.xi, q.delta, [&](double eta) {
        if (in.c_e) {
          r.c_e_source = "config";
          return *in.c_e;
        }
        const auto est = estimate_ehrling_ce(in.domain, eta, r.p, lazy_family());
        r.c_e_source = "estimated:" + est.argmax;
        return est.value;
      });
  r.sigma = sched.sigma;
  r.c_hat = sched.c_hat;
  r.eta = sched.eta;
  r.c_e = sched.c_e;
  r.c_tilde = sched.c_tilde;

  if (in.c_gn) {
    r.c_gn = *in.c_gn;
    r.c_gn_source = "config";
  } else {
    if (n != 2) {
      throw Error(ErrorCode::DomainError, "C_GN can only be estimated for n = 2; supply c_gn");
    }
    const auto est = estimate_cgn(in.domain, r.p, n, lazy_family());
    r.c_gn = est.value;
    r.c_gn_source = "estimated:" + est.argmax;
  }
  r.c_star = c_star(r.p, n, r.mass, r.c_gn);
  const CbarTotal totals = cbar_and_total(r.c1, r.c_tilde, r.mass, r.p, r.c_star);
  r.cbar = totals.cbar;
  r.c_star_total = totals.total;
  r.critical_mass = critical_mass(q.chi, q.alpha, q.xi, q.gamma);

  for (const char* k : {"theta", "c1", "sigma", "c_hat", "eta"}) {
    r.provenance[k] = Provenance::ExactFormula;
  }
  for (const char* k : {"c_e", "c_gn", "c_tilde", "c_star", "cbar", "c_star_total"}) {
    r.provenance[k] = Provenance::EstimatedConstant;
  }
  if (r.critical_mass) r.provenance["critical_mass"] = Provenance::ExactFormula;
  return r;
}

}  // namespace chemo
