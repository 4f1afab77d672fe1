#include "chemo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "chemo/error.hpp"
#include "pairwise_sum.hpp"

namespace chemo {

void DomainSpec::validate() const {
  for (int a = 0; a < 2; ++a) {
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a])) {
      throw Error(ErrorCode::InvalidDomain, "domain lengths must be positive and finite");
    }
    if (cells[a] <= 0) {
      throw Error(ErrorCode::InvalidDomain, "cell counts must be positive");
    }
  }
  const double hx = lengths[0] / cells[0];
  const double hy = lengths[1] / cells[1];
  if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) {
    throw Error(ErrorCode::InvalidDomain, "cells must be square (Lx/Nx == Ly/Ny)");
  }
}

Field::Field(const DomainSpec& dom, double fill) : dom_(dom), values_(dom.size(), fill) {}

Field::Field(const DomainSpec& dom, std::vector<double> values)
    : dom_(dom), values_(std::move(values)) {
  if (values_.size() != dom_.size()) {
    throw Error(ErrorCode::InvalidDomain, "field size does not match domain");
  }
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

namespace {

void require_finite(const Field& f, const char* op) {
  if (!f.all_finite()) {
    throw Error(ErrorCode::NonFiniteField, std::string(op) + ": field has NaN/Inf entries");
  }
}

}  // namespace

double integrate(const Field& f) {
  require_finite(f, "integrate");
  const double h = f.domain().h();
  return h * h * detail::pairwise_sum(f.values());
}

double lp_norm_p(const Field& f, double p) {
  if (!(p >= 1.0)) {
    throw Error(ErrorCode::DomainError, "lp_norm_p requires p >= 1");
  }
  require_finite(f, "lp_norm_p");
  const bool integer_p = p == std::floor(p);
  std::vector<double> powered(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double x = f[k];
    if (x < 0.0 && !integer_p) {
      throw Error(ErrorCode::NegativeFieldWithFractionalPower,
                  "negative entry raised to a fractional power");
    }
    powered[k] = std::pow(std::abs(x), p);
  }
  const double h = f.domain().h();
  return h * h * detail::pairwise_sum(powered);
}

double grad_energy(const Field& f) {
  require_finite(f, "grad_energy");
  const int nx = f.nx();
  const int ny = f.ny();
  // Each face term (df/h)^2 * h^2 reduces to df^2.
  std::vector<double> terms;
  terms.reserve(2 * f.size());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double d = f(i + 1, j) - f(i, j);
      terms.push_back(d * d);
    }
  }
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double d = f(i, j + 1) - f(i, j);
      terms.push_back(d * d);
    }
  }
  return detail::pairwise_sum(terms);
}

Field neumann_laplacian_apply(const Field& f) {
  require_finite(f, "neumann_laplacian_apply");
  const int nx = f.nx();
  const int ny = f.ny();
  const double inv_h2 = 1.0 / (f.domain().h() * f.domain().h());
  Field out(f.domain());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double c = f(i, j);
      // Reflected ghosts equal the boundary cell, so that face drops out.
      const double w = i > 0 ? f(i - 1, j) : c;
      const double e = i + 1 < nx ? f(i + 1, j) : c;
      const double s = j > 0 ? f(i, j - 1) : c;
      const double n = j + 1 < ny ? f(i, j + 1) : c;
      out(i, j) = ((e - c) - (c - w) + (n - c) - (c - s)) * inv_h2;
    }
  }
  return out;
}

double neumann_eigenvalue(int k, double h, double length) {
  return 2.0 / (h * h) * (1.0 - std::cos(k * std::numbers::pi * h / length));
}

double sup_norm(const Field& f) {
  double m = 0.0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

void write_field_csv(const Field& f, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  os << "x,y,value\n";
  char buf[96];
  const auto& dom = f.domain();
  for (int j = 0; j < f.ny(); ++j) {
    for (int i = 0; i < f.nx(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", dom.x_center(i), dom.y_center(j),
                    f(i, j));
      os << buf;
    }
  }
  if (!os) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Field read_field_csv(const DomainSpec& dom, const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,y,value", 0) != 0) {
    throw Error(ErrorCode::IoError, path.string() + ": expected header x,y,value");
  }
  std::vector<double> values;
  values.reserve(dom.size());
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string x, y, v;
    if (!std::getline(ls, x, ',') || !std::getline(ls, y, ',') || !std::getline(ls, v)) {
      throw Error(ErrorCode::IoError,
                  path.string() + ":" + std::to_string(lineno) + ": expected three columns");
    }
    try {
      values.push_back(std::stod(v));
    } catch (const std::exception&) {
      throw Error(ErrorCode::IoError,
                  path.string() + ":" + std::to_string(lineno) + ": bad number '" + v + "'");
    }
  }
  if (values.size() != dom.size()) {
    throw Error(ErrorCode::IoError, path.string() + ": has " + std::to_string(values.size()) +
                                        " values, domain needs " + std::to_string(dom.size()));
  }
  return Field(dom, std::move(values));
}

}  // namespace chemo
