#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chemo/bounds.hpp"
#include "chemo/error.hpp"
#include "oracles/oracles.hpp"

using namespace chemo;
using oracle::hp;

namespace {

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("theta") {
  CHECK(theta(2.0, 2) == 0.5);
  CHECK(theta(3.0, 3) == doctest::Approx(0.75).epsilon(1e-15));
  double prev = 1.0;
  for (int k = 1; k <= 12; ++k) {
    const double t = theta(1.0 + std::pow(10.0, -k), 2);
    CHECK(t > 0.0);
    CHECK(t < prev);
    prev = t;
  }
  CHECK(prev < 1e-11);
  CHECK(code_of([] { theta(1.0, 2); }) == ErrorCode::DomainError);
  CHECK(code_of([] { theta(2.0, 1); }) == ErrorCode::DomainError);
}

TEST_CASE("c1") {
  const double v = c1(2.0, 0.5, 1, 1, 1, 1, 1.0);
  CHECK(oracle::rel(v, hp(1) / 6 / boost::multiprecision::pow(hp("0.4"), 5)) <= 1e-14);
  CHECK(v == doctest::Approx(16.276041666666667).epsilon(1e-14));
  CHECK(c1(2.0, 0.5, 1, 1, 1, 1, 2.0) == doctest::Approx(2 * v).epsilon(1e-15));
  CHECK(code_of([] { c1(2.0, 1.0, 1, 1, 1, 1, 1.0); }) == ErrorCode::RhoNotSublinear);

  SUBCASE("vanishes as rho approaches 1 when the base exceeds one") {
    // (p+1) gamma xi / ((p+rho) 3 alpha chi) = 3 * 4 / ((2 + rho) * 3) > 1.
    double prev = INFINITY;
    for (int k = 1; k <= 6; ++k) {
      const double rho = 1.0 - std::pow(10.0, -k);
      const double got = c1(2.0, rho, 1, 1, 4, 1, 1.0);
      const hp want = oracle::c1(2, hp(1) - boost::multiprecision::pow(hp(10), -k), 1, 1, 4, 1, 1);
      if (want > hp(1e-300)) {
        CHECK(oracle::rel(got, want) <= 1e-9);
        CHECK(got < prev);
      } else {
        CHECK(got < 1e-300);  // the true value underflows double
      }
      prev = got;
    }
    CHECK(prev == 0.0);
  }

  SUBCASE("overflow is an error, not infinity") {
    CHECK(code_of([] { c1(3.0, 1.0 - 1e-6, 10, 10, 0.01, 0.01, 1.0); }) == ErrorCode::ConstantOverflow);
  }
}

TEST_CASE("ehrling schedule") {
  const EhrlingSchedule s = ehrling_schedule(2.0, 1, 1, 1, 1.0);
  CHECK(s.sigma == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(s.c_hat == doctest::Approx(4.0 / 3).epsilon(1e-15));
  CHECK(s.eta > 0.0);
  CHECK(s.eta < 0.5);
  CHECK(s.eta / (1 - 2 * s.eta) * s.k == doctest::Approx(s.sigma).epsilon(1e-14));
  CHECK(s.eta == ehrling_eta(2.0, 1, 1, 1));

  double seen = -1.0;
  const EhrlingSchedule f = ehrling_schedule(2.0, 1, 1, 1, [&](double eta) {
    seen = eta;
    return 2.0;
  });
  CHECK(seen == s.eta);
  CHECK(f.c_tilde == doctest::Approx(2 * s.c_tilde).epsilon(1e-15));
  CHECK_THROWS_AS(ehrling_schedule(2.0, 1, 1, 1, 0.0), Error);
}

TEST_CASE("c_star and totals") {
  CHECK(c_star(2.0, 2, 1.0, 1.0) == doctest::Approx(2.5).epsilon(1e-15));
  double prev = INFINITY;
  for (int k = 1; k <= 8; ++k) {
    const double v = c_star(2.0, 2, std::pow(10.0, -k), 1.0);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 1e-15);
  CHECK(oracle::rel(c_star(2.0, 2, 1.0, 2.0), oracle::c_star(2, 2, 1, 2)) <= 1e-14);
  CHECK(code_of([] { c_star(2.0, 2, 0.0, 1.0); }) == ErrorCode::DomainError);

  const CbarTotal t = cbar_and_total(1.0, 2.0, 1.0, 2.0, 2.5);
  CHECK(t.cbar == 3.0);
  CHECK(t.total == 5.5);
}

TEST_CASE("critical_mass") {
  CHECK(critical_mass(2, 1, 1, 1).value() == doctest::Approx(4 * std::numbers::pi).epsilon(1e-15));
  CHECK_FALSE(critical_mass(1, 1, 1, 1).has_value());
  CHECK_FALSE(critical_mass(1, 1, 2, 1).has_value());
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> c(0.1, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double chi = c(rng), alpha = c(rng), xi = c(rng), gamma = c(rng), lam = c(rng);
    const auto a = critical_mass(chi, alpha, xi, gamma);
    const auto b = critical_mass(lam * chi, alpha / lam, xi, gamma);
    REQUIRE(a.has_value() == b.has_value());
    if (a) CHECK(*b == doctest::Approx(*a).epsilon(1e-12));
  }
}

TEST_CASE("constants agree with the high-precision oracle on random tuples (property)") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> pd(1.05, 3.5), rd(0.05, 0.95), cd(0.2, 5.0), od(0.1, 10.0),
      md(0.05, 50.0), gd(0.1, 10.0);
  int evaluated = 0, overflowed = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double p = pd(rng), rho = rd(rng), alpha = cd(rng), chi = cd(rng), gamma = cd(rng),
                 xi = cd(rng), delta = cd(rng), omega = od(rng), m = md(rng), cg = gd(rng), ce = gd(rng);
    const int n = 2 + static_cast<int>(rng() % 2);
    double c1v = 0.0, cs = 0.0;
    EhrlingSchedule s;
    CbarTotal tot;
    try {
      c1v = c1(p, rho, alpha, chi, gamma, xi, omega);
      s = ehrling_schedule(p, gamma, xi, delta, ce);
      cs = c_star(p, n, m, cg);
      tot = cbar_and_total(c1v, s.c_tilde, m, p, cs);
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::ConstantOverflow);
      ++overflowed;
      continue;
    }
    ++evaluated;
    const hp P(p), R(rho), A(alpha), X(chi), G(gamma), Xi(xi), D(delta), O(omega), M(m), C(cg), E(ce);
    const hp sig = oracle::sigma(P, G, Xi), ch = oracle::c_hat(P, G, Xi, D), k = oracle::k_factor(P, G, ch);
    const hp eta = oracle::eta_by_bisection(sig, k);
    const hp ct = oracle::c_tilde(P, G, D, ch, sig, k, E);
    const hp c1o = oracle::c1(P, R, A, X, G, Xi, O);
    const hp cso = oracle::c_star(P, n, M, C);
    const hp cbar = c1o + ct * boost::multiprecision::pow(M, P + 1);
    const double errs[] = {
        oracle::rel(theta(p, n), oracle::theta(P, n)), oracle::rel(c1v, c1o),
        oracle::rel(s.sigma, sig),  oracle::rel(s.c_hat, ch),
        oracle::rel(s.eta, eta),    oracle::rel(s.c_tilde, ct),
        oracle::rel(cs, cso),       oracle::rel(tot.cbar, cbar),
        oracle::rel(tot.total, cbar + cso),
    };
    for (double e : errs) {
      CHECK(e <= 1e-12);
      worst = std::max(worst, e);
    }
    CHECK(s.eta > 0.0);
    CHECK(s.eta < 0.5);
  }
  MESSAGE("evaluated " << evaluated << ", overflowed " << overflowed << ", worst relative error " << worst);
  CHECK(evaluated >= 950);
}

TEST_CASE("eta stays inside (0, 1/2) (property)") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> pd(1.01, 6.0), cd(0.01, 100.0);
  for (int trial = 0; trial < 1000; ++trial) {
    double eta = 0.0;
    try {
      eta = ehrling_eta(pd(rng), cd(rng), cd(rng), cd(rng));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConstantOverflow);
      continue;
    }
    CHECK(eta > 0.0);
    CHECK(eta < 0.5);
  }
}

TEST_CASE("estimate_cgn") {
  DomainSpec unit{{1.0, 1.0}, {64, 64}};
  const ConstantEstimate e = estimate_cgn(unit, 2.0, 2);
  CHECK(e.value >= 1.0);
  CHECK_FALSE(e.argmax.empty());
  CHECK(code_of([&] { estimate_cgn(unit, 2.0, 3); }) == ErrorCode::DomainError);

  SUBCASE("constant member gives exactly one") {
    const std::vector<TestField> only{{"one", Field(unit, 1.0)}};
    CHECK(estimate_cgn(unit, 2.0, 2, only).value == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("monotone in the family") {
    const auto family = make_test_family(unit);
    double prev = 0.0;
    for (std::size_t k = 1; k <= family.size(); ++k) {
      const double v = estimate_cgn(unit, 2.0, 2, std::span(family).first(k)).value;
      CHECK(v >= prev);
      prev = v;
    }
    CHECK(prev == e.value);
  }

  SUBCASE("stable under refinement") {
    const double a = estimate_cgn(DomainSpec{{1.0, 1.0}, {64, 64}}, 2.0, 2).value;
    const double b = estimate_cgn(DomainSpec{{1.0, 1.0}, {128, 128}}, 2.0, 2).value;
    const double c = estimate_cgn(DomainSpec{{1.0, 1.0}, {256, 256}}, 2.0, 2).value;
    MESSAGE("C_GN estimates 64/128/256: " << a << " " << b << " " << c);
    auto two_digits = [](double x) {
      const double scale = std::pow(10.0, std::floor(std::log10(x)) - 1);
      return std::round(x / scale) * scale;
    };
    CHECK(two_digits(b) == doctest::Approx(two_digits(c)).epsilon(1e-12));
    CHECK(two_digits(a) == doctest::Approx(two_digits(b)).epsilon(1e-12));
  }
}

TEST_CASE("estimate_ehrling_ce") {
  DomainSpec unit{{1.0, 1.0}, {64, 64}};
  const double p = 1.5;
  CHECK(code_of([&] { estimate_ehrling_ce(unit, 0.5, p); }) == ErrorCode::DomainError);
  CHECK(code_of([&] { estimate_ehrling_ce(unit, 1.0, p); }) == ErrorCode::DomainError);
  CHECK(code_of([&] { estimate_ehrling_ce(unit, 0.0, p); }) == ErrorCode::DomainError);

  for (double eta : {0.01, 0.1, 0.3}) {
    CHECK(estimate_ehrling_ce(unit, eta, p).value >= 1.0 - eta);
  }

  SUBCASE("constant member matches the closed form") {
    DomainSpec rect{{2.0, 1.0}, {64, 32}};
    const std::vector<TestField> only{{"one", Field(rect, 1.0)}};
    // ||1||_2^2 = |Omega|, ||1||_{2/(p+1)}^2 = |Omega|^(p+1).
    const double want = (1 - 0.2) * 2.0 / std::pow(2.0, p + 1);
    CHECK(estimate_ehrling_ce(rect, 0.2, p, only).value == doctest::Approx(want).epsilon(1e-13));
  }

  SUBCASE("increases as eta decreases") {
    const auto family = make_test_family(unit);
    double prev = 0.0;
    for (double eta : {0.45, 0.3, 0.2, 0.1, 0.05, 0.01, 0.001}) {
      const double v = estimate_ehrling_ce(unit, eta, p, family).value;
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("compute_bounds") {
  BoundsInputs in;
  in.params = ModelParams{.rho = 0.5};
  in.domain = DomainSpec{{1.0, 1.0}, {32, 32}};
  in.mass = 1.0;
  in.p = 2.0;
  in.c_gn = 1.0;
  in.c_e = 1.0;
  const BoundsReport r = compute_bounds(in);
  CHECK(r.theta == 0.5);
  CHECK(r.c1 == doctest::Approx(16.276041666666667).epsilon(1e-14));
  CHECK(r.c_star == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(r.c_star_total == doctest::Approx(r.c_star + r.cbar).epsilon(1e-15));
  CHECK(r.c_gn_source == "config");
  CHECK(r.provenance.at("theta") == Provenance::ExactFormula);
  CHECK(r.provenance.at("c1") == Provenance::ExactFormula);
  CHECK(r.provenance.at("sigma") == Provenance::ExactFormula);
  CHECK(r.provenance.at("c_hat") == Provenance::ExactFormula);
  CHECK(r.provenance.at("c_star") == Provenance::EstimatedConstant);
  CHECK(r.provenance.at("c_tilde") == Provenance::EstimatedConstant);
  CHECK(r.provenance.at("c_star_total") == Provenance::EstimatedConstant);
  CHECK_FALSE(r.critical_mass.has_value());

  BoundsInputs est = in;
  est.c_gn.reset();
  est.c_e.reset();
  const BoundsReport e = compute_bounds(est);
  CHECK(e.c_gn >= 1.0);
  CHECK(e.c_gn_source.rfind("estimated:", 0) == 0);
  CHECK(e.c_e_source.rfind("estimated:", 0) == 0);
  CHECK(e.c_e >= 1.0 - e.eta);

  BoundsInputs linear = in;
  linear.params.rho = 1.0;
  CHECK(code_of([&] { compute_bounds(linear); }) == ErrorCode::RhoNotSublinear);
  CHECK(default_exponent(2) == 1.5);
}
