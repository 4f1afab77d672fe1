#include "chemo/elliptic.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "chemo/error.hpp"

namespace chemo {

namespace {

// FFTW's planner is not reentrant; executing an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct HelmholtzSolver::Impl {
  DomainSpec dom;
  double* buffer = nullptr;
  fftw_plan forward = nullptr;   // DCT-II
  fftw_plan backward = nullptr;  // DCT-III
  std::vector<double> lambda_x;
  std::vector<double> lambda_y;

  explicit Impl(const DomainSpec& d) : dom(d) {
    dom.validate();
    const int nx = dom.nx();
    const int ny = dom.ny();
    {
      std::lock_guard lock(planner_mutex());
      buffer = static_cast<double*>(fftw_malloc(sizeof(double) * dom.size()));
      forward = fftw_plan_r2r_2d(ny, nx, buffer, buffer, FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
      backward = fftw_plan_r2r_2d(ny, nx, buffer, buffer, FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
    }
    if (!buffer || !forward || !backward) {
      release();
      throw Error(ErrorCode::SolverDiverged, "could not create cosine transform plans");
    }
    const double h = dom.h();
    lambda_x.resize(nx);
    lambda_y.resize(ny);
    for (int k = 0; k < nx; ++k) lambda_x[k] = neumann_eigenvalue(k, h, dom.lengths[0]);
    for (int l = 0; l < ny; ++l) lambda_y[l] = neumann_eigenvalue(l, h, dom.lengths[1]);
  }

  ~Impl() { release(); }

  void release() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (buffer) fftw_free(buffer);
    forward = backward = nullptr;
    buffer = nullptr;
  }
};

HelmholtzSolver::HelmholtzSolver(const DomainSpec& dom) : impl_(std::make_unique<Impl>(dom)) {}
HelmholtzSolver::~HelmholtzSolver() = default;
HelmholtzSolver::HelmholtzSolver(HelmholtzSolver&&) noexcept = default;
HelmholtzSolver& HelmholtzSolver::operator=(HelmholtzSolver&&) noexcept = default;

const DomainSpec& HelmholtzSolver::domain() const { return impl_->dom; }

Field HelmholtzSolver::solve(const Field& source, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw Error(ErrorCode::NonPositiveKappa, "kappa must be positive, got " + std::to_string(kappa));
  }
  if (!(source.domain() == impl_->dom)) {
    throw Error(ErrorCode::InvalidDomain, "source grid does not match solver grid");
  }
  if (!source.all_finite()) {
    throw Error(ErrorCode::NonFiniteField, "Helmholtz source has NaN/Inf entries");
  }

  // Constant data has the constant solution; returning it directly keeps
  // uniform states exact fixed points instead of carrying transform noise.
  const auto vals = source.values();
  if (std::all_of(vals.begin(), vals.end(), [&](double x) { return x == vals[0]; })) {
    return Field(impl_->dom, vals[0] / kappa);
  }

  const int nx = impl_->dom.nx();
  const int ny = impl_->dom.ny();
  double* buf = impl_->buffer;
  std::copy(vals.begin(), vals.end(), buf);
  fftw_execute(impl_->forward);
  const double norm = 1.0 / (4.0 * nx * ny);
  for (int l = 0; l < ny; ++l) {
    const double ly = impl_->lambda_y[l];
    for (int k = 0; k < nx; ++k) {
      buf[static_cast<std::size_t>(l) * nx + k] *= norm / (kappa + impl_->lambda_x[k] + ly);
    }
  }
  fftw_execute(impl_->backward);

  Field out(impl_->dom, std::vector<double>(buf, buf + source.size()));
  if (!out.all_finite()) {
    throw Error(ErrorCode::SolverDiverged, "Helmholtz solution is not finite");
  }
  return out;
}

Field solve_helmholtz(const HelmholtzProblem& prob) {
  HelmholtzSolver solver(prob.source.domain());
  return solver.solve(prob.source, prob.kappa);
}

std::pair<Field, Field> chemical_sources(const Field& u, const ModelParams& p) {
  Field attract(u.domain());
  Field repel(u.domain());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double x = u[k];
    if (x < 0.0) {
      throw Error(ErrorCode::NegativeDensity, "u < 0 at cell " + std::to_string(k));
    }
    attract[k] = p.alpha * (p.rho == 1.0 ? x : std::pow(x, p.rho));
    repel[k] = p.gamma * x;
  }
  return {std::move(attract), std::move(repel)};
}

namespace {

void check_max_principle(const Field& f, const char* name) {
  const double hi = f.max();
  const double lo = f.min();
  if (lo < -1e-13 * std::max(hi, 0.0)) {
    throw Error(ErrorCode::MaximumPrincipleViolated,
                std::string(name) + " min " + std::to_string(lo) + " below tolerance");
  }
}

}  // namespace

Signals solve_signals(const Field& u, const ModelParams& p, HelmholtzSolver& solver) {
  auto [attract, repel] = chemical_sources(u, p);
  Signals s{solver.solve(attract, p.beta), solver.solve(repel, p.delta)};
  check_max_principle(s.v, "v");
  check_max_principle(s.w, "w");
  return s;
}

Signals solve_signals(const Field& u, const ModelParams& p) {
  HelmholtzSolver solver(u.domain());
  return solve_signals(u, p, solver);
}

}  // namespace chemo
