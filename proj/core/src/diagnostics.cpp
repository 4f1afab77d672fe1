#include "chemo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "chemo/error.hpp"

namespace chemo {

namespace {

std::size_t index_of(const std::vector<double>& ps, double p) {
  const auto it = std::find(ps.begin(), ps.end(), p);
  if (it == ps.end()) {
    throw Error(ErrorCode::MismatchedP, "exponent " + std::to_string(p) + " was not sampled");
  }
  return static_cast<std::size_t>(it - ps.begin());
}

}  // namespace

double DiagnosticsRecord::energy_for(double p) const { return energy[index_of(ps, p)]; }
double DiagnosticsRecord::grad_energy_for(double p) const {
  return grad_energy[index_of(ps, p)];
}

DiagnosticsRecord sample(const SimState& state, std::span<const double> ps,
                         const BoundsReport* bounds) {
  if (!state.u.all_finite() || !state.v.all_finite() || !state.w.all_finite()) {
    throw Error(ErrorCode::NonFiniteState, "cannot sample a non-finite state");
  }
  if (ps.empty()) throw Error(ErrorCode::MismatchedP, "no exponents configured");
  if (bounds && bounds->p != ps.front()) {
    throw Error(ErrorCode::MismatchedP, "bounds exponent must be the first sampled exponent");
  }
  DiagnosticsRecord r;
  r.t = state.t;
  r.step = state.step;
  r.mass = integrate(state.u);
  r.u_min = state.u.min();
  r.u_max = state.u.max();
  r.v_max = state.v.max();
  r.w_max = state.w.max();
  r.ps.assign(ps.begin(), ps.end());

  Field positive = state.u;
  for (double& x : positive.values()) x = std::max(x, 0.0);
  Field root(state.u.domain());
  for (double p : ps) {
    if (!(p > 1.0)) throw Error(ErrorCode::DomainError, "sampled exponents must exceed 1");
    r.energy.push_back(lp_norm_p(positive, p));
    for (std::size_t k = 0; k < root.size(); ++k) root[k] = std::pow(positive[k], 0.5 * p);
    r.grad_energy.push_back(grad_energy(root));
  }
  if (bounds) {
    const double p = ps.front();
    r.rhs_bound = -(4.0 * (p - 1.0) / p) * r.grad_energy.front() + bounds->cbar;
  }
  return r;
}

void link_samples(const DiagnosticsRecord& prev, DiagnosticsRecord& next) {
  const double dt = next.t - prev.t;
  next.dEdt = dt > 0.0 ? (next.energy.front() - prev.energy.front()) / dt : 0.0;
}

InequalityReport check_energy_inequality(std::span<const DiagnosticsRecord> series, double p,
                                         double cbar) {
  if (series.size() < 2) {
    throw Error(ErrorCode::InsufficientSamples, "need at least two samples");
  }
  const std::size_t k = index_of(series.front().ps, p);
  InequalityReport rep;
  rep.p = p;
  rep.cbar = cbar;
  rep.worst_excess = -std::numeric_limits<double>::infinity();
  const double weight = 4.0 * (p - 1.0) / p;
  for (std::size_t s = 1; s < series.size(); ++s) {
    const auto& a = series[s - 1];
    const auto& b = series[s];
    if (a.ps != b.ps) throw Error(ErrorCode::MismatchedP, "samples disagree on exponents");
    const double dt = b.t - a.t;
    if (!(dt > 0.0)) continue;
    const double lhs = (b.energy[k] - a.energy[k]) / dt;
    const double grad_mid = 0.5 * (a.grad_energy[k] + b.grad_energy[k]);
    const double rhs = -weight * grad_mid + cbar;
    const double scale = std::abs(rhs) + cbar;
    ++rep.pairs;
    if (lhs <= rhs + 0.05 * scale) ++rep.satisfied;
    if (scale > 0.0) rep.worst_excess = std::max(rep.worst_excess, (lhs - rhs) / scale);
  }
  if (rep.pairs == 0) throw Error(ErrorCode::InsufficientSamples, "no increasing time pairs");
  return rep;
}

AbsorptiveReport check_absorptive_bound(std::span<const DiagnosticsRecord> series, double p,
                                        double e0, double c_star_total, bool constants_exact) {
  AbsorptiveReport rep;
  rep.bound = std::max(e0, c_star_total);
  rep.constants_exact = constants_exact;
  double peak = e0;
  for (const auto& r : series) peak = std::max(peak, r.energy_for(p));
  rep.ratio = peak / rep.bound;
  rep.within = constants_exact ? rep.ratio <= 1.0 + 1e-6 : rep.ratio <= 1.0;
  return rep;
}

bool detect_blowup(const SimState& state, double threshold) {
  if (!(threshold > 0.0)) throw Error(ErrorCode::DomainError, "threshold must be positive");
  return state.u.max() > threshold;
}

void write_diagnostics_csv(std::span<const DiagnosticsRecord> series,
                           const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  char buf[64];
  std::vector<double> ps = series.empty() ? std::vector<double>{} : series.front().ps;
  os << "t,mass,u_min,u_max";
  for (double p : ps) {
    std::snprintf(buf, sizeof buf, ",E_%g", p);
    os << buf;
  }
  for (double p : ps) {
    std::snprintf(buf, sizeof buf, ",gradE_%g", p);
    os << buf;
  }
  os << ",v_max,w_max,dEdt,rhs_bound\n";
  auto put = [&](double x, bool first = false) {
    std::snprintf(buf, sizeof buf, "%s%.17g", first ? "" : ",", x);
    os << buf;
  };
  for (const auto& r : series) {
    put(r.t, true);
    put(r.mass);
    put(r.u_min);
    put(r.u_max);
    for (double e : r.energy) put(e);
    for (double g : r.grad_energy) put(g);
    put(r.v_max);
    put(r.w_max);
    put(r.dEdt);
    put(r.rhs_bound);
    os << '\n';
  }
  if (!os) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace chemo
