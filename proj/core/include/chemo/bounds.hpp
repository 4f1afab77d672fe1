#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chemo/grid.hpp"
#include "chemo/model.hpp"

namespace chemo {

// Closed-form constants behind the L^p energy estimate for rho < 1. Every
// power with a potentially large exponent is evaluated as exp(e * log(b)) and
// checked for overflow (ConstantOverflow) instead of returning inf.

/// (p/2 - 1/2) / (p/2 + 1/n - 1/2). Throws DomainError unless p > 1, n >= 2.
double theta(double p, int n);

/// alpha chi (p-1)(1-rho)/(p+1) * ((p+1) gamma xi / ((p+rho) 3 alpha chi))^((p+rho)/(rho-1)) * |Omega|
/// Throws RhoNotSublinear for rho >= 1.
double c1(double p, double rho, double alpha, double chi, double gamma, double xi,
          double omega_volume);

struct EhrlingSchedule {
  double sigma = 0.0;    // gamma xi (p-1) / 3
  double c_hat = 0.0;    // xi delta (p-1)/(p+1) ((p+1) gamma / (3 p delta))^(-p)
  double k = 0.0;        // (gamma (p+1))^(p+1) c_hat / (4^(p+1) p)
  double eta = 0.0;      // sigma(eta) inverted: sigma / (2 sigma + k), in (0, 1/2)
  double c_e = 0.0;      // Ehrling constant used at eta
  double c_tilde = 0.0;  // (gamma/delta)^(p+1) (c_hat + 2 sigma / k) c_E(eta)
};

/// eta alone; needed before c_E can be estimated.
double ehrling_eta(double p, double gamma, double xi, double delta);

EhrlingSchedule ehrling_schedule(double p, double gamma, double xi, double delta,
                                 double c_e_at_eta);
EhrlingSchedule ehrling_schedule(double p, double gamma, double xi, double delta,
                                 const std::function<double(double eta)>& c_e);

/// 2 m^p C^2 [ (1-theta) m^p (2(p-1)/(p theta C^2))^(theta/(theta-1)) + 1 ].
double c_star(double p, int n, double m, double c_gn);

struct CbarTotal {
  double cbar = 0.0;
  double total = 0.0;
};

CbarTotal cbar_and_total(double c1_value, double c_tilde, double m, double p, double c_star_value);

/// 4 pi / (chi alpha - xi gamma) if chi alpha > xi gamma, else nullopt.
std::optional<double> critical_mass(double chi, double alpha, double xi, double gamma);

// --- Numerical estimates of the two non-explicit constants -----------------

struct TestField {
  std::string name;
  Field f;
};

struct FamilyOptions {
  int max_mode = 4;
  std::vector<double> widths{0.3, 0.15, 0.08, 0.04};  // fractions of min(Lx, Ly)
  int random_members = 8;
  unsigned long long seed = 20240611ULL;
};

/// Constants, offset and rectified cosine modes, Gaussian bumps at interior,
/// edge and corner centers, and random smooth fields. Order is fixed.
std::vector<TestField> make_test_family(const DomainSpec& dom, const FamilyOptions& opts = {});

struct ConstantEstimate {
  double value = 0.0;
  std::string argmax;
};

/// Largest ratio ||f||_2 / (||grad f||_2^theta ||f||_{2/p}^{1-theta} + ||f||_{2/p})
/// over the family; a lower estimate of the best constant.
ConstantEstimate estimate_cgn(const DomainSpec& dom, double p, int n,
                              std::span<const TestField> family);
ConstantEstimate estimate_cgn(const DomainSpec& dom, double p, int n);

/// Largest (||V||_2^2 - eta ||V||_{W^{1,2}}^2) / ||V||_{2/(p+1)}^2 over the
/// family, floored at 0. Requires 0 < eta < 1/2.
ConstantEstimate estimate_ehrling_ce(const DomainSpec& dom, double eta, double p,
                                     std::span<const TestField> family);
ConstantEstimate estimate_ehrling_ce(const DomainSpec& dom, double eta, double p);

// --- Report ----------------------------------------------------------------

enum class Provenance { ExactFormula, EstimatedConstant };

std::string_view to_string(Provenance p);

struct BoundsReport {
  double p = 0.0;
  int n = 2;
  double mass = 0.0;
  double omega_volume = 0.0;
  double theta = 0.0;
  double c1 = 0.0;
  double sigma = 0.0;
  double c_hat = 0.0;
  double eta = 0.0;
  double c_e = 0.0;
  double c_tilde = 0.0;
  double cbar = 0.0;
  double c_gn = 0.0;
  double c_star = 0.0;
  double c_star_total = 0.0;
  std::optional<double> critical_mass;
  std::string c_gn_source;  // "estimated:<argmax>" or "config"
  std::string c_e_source;
  std::map<std::string, Provenance> provenance;
};

struct BoundsInputs {
  ModelParams params;
  DomainSpec domain;
  double mass = 0.0;
  double p = 0.0;
  std::optional<double> c_gn;  // estimated on `domain` when absent
  std::optional<double> c_e;   // estimated at the schedule's eta when absent
};

/// Default exponent 3n/4, the midpoint of (n/2, n).
double default_exponent(int n);

BoundsReport compute_bounds(const BoundsInputs& in);

}  // namespace chemo
