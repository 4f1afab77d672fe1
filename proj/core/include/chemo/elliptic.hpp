#pragma once

#include <memory>
#include <utility>

#include "chemo/grid.hpp"
#include "chemo/model.hpp"

namespace chemo {

/// -lap_h(phi) + kappa phi = source with homogeneous Neumann data.
struct HelmholtzProblem {
  Field source;
  double kappa = 1.0;
};

/// Screened-Poisson solver for one grid, diagonalised by the cosine transform.
///
/// The cell-centered Neumann stencil has the DCT-II vectors as exact
/// eigenvectors, so a forward DCT-II, a pointwise division by
/// kappa + lambda_x(k) + lambda_y(l) and a DCT-III give the discrete solution
/// directly. Plans are built with FFTW_ESTIMATE so the algorithm (and hence
/// every rounding) is the same on every run.
///
/// An instance owns its transform buffers: use one per thread.
class HelmholtzSolver {
 public:
  explicit HelmholtzSolver(const DomainSpec& dom);
  ~HelmholtzSolver();
  HelmholtzSolver(HelmholtzSolver&&) noexcept;
  HelmholtzSolver& operator=(HelmholtzSolver&&) noexcept;
  HelmholtzSolver(const HelmholtzSolver&) = delete;
  HelmholtzSolver& operator=(const HelmholtzSolver&) = delete;

  const DomainSpec& domain() const;

  /// Throws NonPositiveKappa, NonFiniteField or SolverDiverged.
  Field solve(const Field& source, double kappa);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper; builds a solver for the source's grid.
Field solve_helmholtz(const HelmholtzProblem& prob);

/// (alpha u^rho, gamma u). Throws NegativeDensity on any u < 0.
std::pair<Field, Field> chemical_sources(const Field& u, const ModelParams& p);

struct Signals {
  Field v;
  Field w;
};

/// v from (alpha u^rho, beta), w from (gamma u, delta). Throws
/// MaximumPrincipleViolated if either minimum drops below -1e-13 * max.
Signals solve_signals(const Field& u, const ModelParams& p, HelmholtzSolver& solver);
Signals solve_signals(const Field& u, const ModelParams& p);

}  // namespace chemo
