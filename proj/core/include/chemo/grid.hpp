#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace chemo {

/// Axis-aligned rectangle [0,Lx]x[0,Ly] split into Nx x Ny square cells.
struct DomainSpec {
  std::array<double, 2> lengths{1.0, 1.0};
  std::array<int, 2> cells{64, 64};

  /// Throws InvalidDomain unless lengths and cell counts are positive and
  /// Lx/Nx == Ly/Ny to 1e-12 relative.
  void validate() const;

  double volume() const { return lengths[0] * lengths[1]; }
  double h() const { return lengths[0] / cells[0]; }
  int nx() const { return cells[0]; }
  int ny() const { return cells[1]; }
  std::size_t size() const { return static_cast<std::size_t>(cells[0]) * cells[1]; }

  double x_center(int i) const { return (i + 0.5) * h(); }
  double y_center(int j) const { return (j + 0.5) * h(); }

  bool operator==(const DomainSpec&) const = default;
};

/// Cell-centered scalar on a DomainSpec. Storage is row-major with x fastest:
/// value(i, j) lives at index j * nx + i.
class Field {
 public:
  Field() = default;
  explicit Field(const DomainSpec& dom, double fill = 0.0);
  Field(const DomainSpec& dom, std::vector<double> values);

  const DomainSpec& domain() const { return dom_; }
  int nx() const { return dom_.nx(); }
  int ny() const { return dom_.ny(); }
  std::size_t size() const { return values_.size(); }

  double& operator()(int i, int j) { return values_[index(i, j)]; }
  double operator()(int i, int j) const { return values_[index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * dom_.nx() + i;
  }

  double min() const;
  double max() const;
  bool all_finite() const;

 private:
  DomainSpec dom_;
  std::vector<double> values_;
};

// Midpoint quadrature h^2 * sum(f). Summation is pairwise over the flat
// storage in index order, so the result is deterministic.
double integrate(const Field& f);

/// Energy functional: integral of |f|^p. This is not the L^p norm; no 1/p root.
double lp_norm_p(const Field& f, double p);

/// Discrete Dirichlet energy: sum over interior faces of (df/h)^2 * h^2.
/// Boundary faces carry zero flux and contribute nothing.
double grad_energy(const Field& f);

/// 5-point Laplacian with reflected ghost cells (homogeneous Neumann).
Field neumann_laplacian_apply(const Field& f);

/// Eigenvalue magnitude of the 1D Neumann second difference for mode k on a
/// side of length L split into cells of size h: (2/h^2)(1 - cos(k*pi*h/L)).
double neumann_eigenvalue(int k, double h, double length);

double sup_norm(const Field& f);

// Snapshot CSV: header "x,y,value", j outer / i inner, 17 significant digits.
void write_field_csv(const Field& f, const std::filesystem::path& path);
Field read_field_csv(const DomainSpec& dom, const std::filesystem::path& path);

}  // namespace chemo
