#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "nschc/coeffs.hpp"

using namespace nschc;

namespace {

ModelParams params() {
  ModelParams p;
  p.rho1 = 1.0;
  p.rho2 = 5.0;
  p.nu1 = 0.2;
  p.nu2 = 0.05;
  p.m_star = 0.01;
  p.m_star_upper = 0.03;
  p.theta = 0.8;
  p.theta0 = 2.0;
  p.chi = 1.5;
  p.eps_int = 0.05;
  p.eps_reg = 0.01;
  return p;
}

// independent Flory-Huggins reference
double fh_value(double r, double theta, double theta0) {
  return 0.5 * theta * ((1 + r) * std::log(1 + r) + (1 - r) * std::log(1 - r)) - 0.5 * theta0 * r * r;
}

template <class F>
double central(F f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

}  // namespace

TEST_CASE("density extension") {
  const ModelParams p = params();
  for (double r = -1.0; r <= 1.0; r += 0.01) CHECK(rho_hat(r, p) == doctest::Approx(rho(r, p)).epsilon(1e-14));
  CHECK(rho_hat(2.0, p) == rho_hat(7.0, p));
  CHECK(rho_hat(-2.0, p) == rho_hat(-30.0, p));
  const auto [lo, hi] = rho_hat_bounds(p);
  CHECK(lo >= 0.5 * p.rho_min());
  CHECK(hi <= 2.0 * p.rho_max());
  for (double r = -4.0; r <= 4.0; r += 1e-3) {
    const double v = rho_hat(r, p);
    CHECK(v >= lo - 1e-14);
    CHECK(v <= hi + 1e-14);
  }
  // C^2 at the junctions
  for (double r : {-2.0, -1.0, 1.0, 2.0}) {
    CHECK(rho_hat_prime(r - 1e-9, p) == doctest::Approx(rho_hat_prime(r + 1e-9, p)).epsilon(1e-6));
    CHECK(rho_hat_second(r - 1e-9, p) == doctest::Approx(rho_hat_second(r + 1e-9, p)).epsilon(1e-6));
  }
  for (double r = -2.5; r <= 2.5; r += 0.137) {
    CHECK(rho_hat_prime(r, p) == doctest::Approx(central([&](double x) { return rho_hat(x, p); }, r)).epsilon(1e-6));
  }
}

TEST_CASE("Flory-Huggins potential against an independent formula") {
  for (double r = -0.999; r < 1.0; r += 0.0137) {
    const PotentialEval e = psi_fh(r, 0.8, 2.0);
    CHECK(e.value == doctest::Approx(fh_value(r, 0.8, 2.0)).epsilon(1e-12));
    CHECK(e.first == doctest::Approx(0.8 * std::atanh(r) - 2.0 * r).epsilon(1e-12));
    CHECK(e.second == doctest::Approx(0.8 / (1 - r * r) - 2.0).epsilon(1e-12));
  }
  // tiny r, where naive logs lose digits
  CHECK(psi_fh(1e-9, 1.0, 0.0).value == doctest::Approx(0.5e-18).epsilon(1e-6));
  CHECK_THROWS_AS(psi_fh(1.0, 1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(psi_fh(-1.2, 1.0, 2.0), std::domain_error);
}

TEST_CASE("regularised potential: equal inside, C^2 Taylor continuation outside, convex") {
  const ModelParams p = params();
  const double edge = 1.0 - p.eps_reg;
  for (double r = -edge; r <= edge; r += 0.01) {
    CHECK(psi0_eps(r, p).value == doctest::Approx(psi0(r, p).value).epsilon(1e-14));
  }
  for (double s : {-1.0, 1.0}) {
    const double r = s * edge;
    const PotentialEval in = psi0_eps(r - s * 1e-10, p);
    const PotentialEval out = psi0_eps(r + s * 1e-10, p);
    CHECK(in.value == doctest::Approx(out.value).epsilon(1e-8));
    CHECK(in.first == doctest::Approx(out.first).epsilon(1e-7));
    CHECK(in.second == doctest::Approx(out.second).epsilon(1e-7));
  }
  // quadratic beyond the window: second derivative frozen at the edge value
  CHECK(psi0_eps(1.7, p).second == doctest::Approx(psi0(edge, p).second));
  for (double r = -3.0; r <= 3.0; r += 0.01) {
    CHECK(psi0_eps(r, p).second >= p.theta - 1e-12);
    const PotentialEval e = psi_eps(r, p);
    CHECK(e.first == doctest::Approx(central([&](double x) { return psi_eps(x, p).value; }, r)).epsilon(1e-5));
  }
}

TEST_CASE("interaction function beta") {
  const ModelParams p = params();
  for (double r = -1.0; r <= 1.0; r += 0.05) {
    CHECK(beta(r, p) == doctest::Approx(p.chi * (1 - r)));
    CHECK(beta_prime(r, p) == doctest::Approx(-p.chi));
  }
  for (double r : {-2.0, -2.5, 2.0, 9.0}) {
    CHECK(beta(r, p) == 0.0);
    CHECK(beta_prime(r, p) == 0.0);
  }
  // C^3 at the junctions
  for (double r : {-2.0, -1.0, 1.0, 2.0}) {
    CAPTURE(r);
    CHECK(beta(r - 1e-9, p) == doctest::Approx(beta(r + 1e-9, p)).epsilon(1e-7));
    CHECK(beta_prime(r - 1e-9, p) == doctest::Approx(beta_prime(r + 1e-9, p)).epsilon(1e-6));
    CHECK(std::abs(beta_second(r - 1e-9, p) - beta_second(r + 1e-9, p)) < 1e-6);
    CHECK(std::abs(beta_third(r - 1e-9, p) - beta_third(r + 1e-9, p)) < 1e-5);
  }
  for (double r = -2.3; r <= 2.3; r += 0.071) {
    CHECK(beta_prime(r, p) == doctest::Approx(central([&](double x) { return beta(x, p); }, r)).epsilon(1e-6));
    CHECK(beta_second(r, p) ==
          doctest::Approx(central([&](double x) { return beta_prime(x, p); }, r)).epsilon(1e-5).scale(1.0));
    CHECK(beta_third(r, p) ==
          doctest::Approx(central([&](double x) { return beta_second(x, p); }, r)).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("viscosity and mobility stay within their reported bounds") {
  const ModelParams p = params();
  CHECK(nu(-1.0, p) == doctest::Approx(p.nu1));
  CHECK(nu(1.0, p) == doctest::Approx(p.nu2));
  CHECK(mobility(-1.0, p) == doctest::Approx(p.m_star));
  CHECK(mobility(1.0, p) == doctest::Approx(p.m_star_upper));
  CHECK(nu(0.0, p) == doctest::Approx(0.5 * (p.nu1 + p.nu2)));
  const auto [nlo, nhi] = nu_bounds(p);
  const auto [mlo, mhi] = mobility_bounds(p);
  CHECK(nlo > 0.0);
  CHECK(mlo > 0.0);
  for (double r = -5.0; r <= 5.0; r += 1e-4) {
    const double n = nu(r, p);
    const double m = mobility(r, p);
    REQUIRE(n >= nlo - 1e-15);
    REQUIRE(n <= nhi + 1e-15);
    REQUIRE(m >= mlo - 1e-15);
    REQUIRE(m <= mhi + 1e-15);
  }
  for (double r : {-2.0, -1.0, 1.0, 2.0}) {
    CHECK(nu_prime(r - 1e-9, p) == doctest::Approx(nu_prime(r + 1e-9, p)).epsilon(1e-5).scale(1e-3));
    CHECK(mobility_prime(r - 1e-9, p) == doctest::Approx(mobility_prime(r + 1e-9, p)).epsilon(1e-5).scale(1e-4));
  }
}

TEST_CASE("Young pair: sweep and equality case") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  for (int k = 0; k < 10000; ++k) {
    const double a = 20.0 * u(rng) * u(rng);
    const double b = std::expm1(10.0 * u(rng));
    const auto [f, g] = young_pair(a, b);
    if (a * b > f + g + 1e-12 * (1 + a * b)) ++violations;
  }
  CHECK(violations == 0);
  for (double b : {0.0, 1e-8, 0.3, 1.0, 17.0, 1e6}) {
    const double a = std::log1p(b);
    const auto [f, g] = young_pair(a, b);
    CHECK(std::abs(a * b - (f + g)) <= 1e-12 * std::max(1.0, a * b));
  }
  CHECK_THROWS_AS(young_pair(-0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(young_pair(0.1, -1.0), std::domain_error);
}

TEST_CASE("hypothesis validation") {
  ModelParams p = params();
  CHECK(validate_hypotheses(p, 0.0).ok());

  ModelParams bad = p;
  bad.theta = -1.0;
  auto rep = validate_hypotheses(bad);
  CHECK_FALSE(rep.ok());
  REQUIRE(rep.find("H1") != nullptr);
  CHECK(rep.find("H1")->status == CheckStatus::violated);

  bad = p;
  bad.m_star = 0.0;
  CHECK(validate_hypotheses(bad).find("H3")->status == CheckStatus::violated);
  bad = p;
  bad.nu1 = -0.1;
  CHECK(validate_hypotheses(bad).find("H2")->status == CheckStatus::violated);
  bad = p;
  bad.rho2 = 0.0;
  CHECK(validate_hypotheses(bad).find("density")->status == CheckStatus::violated);
  bad = p;
  bad.eps_int = 0.0;
  CHECK(validate_hypotheses(bad).find("interface")->status == CheckStatus::violated);

  // regularisation width must leave room for the mean
  CHECK_FALSE(validate_hypotheses(p, 0.99).ok());
  CHECK(validate_hypotheses(p, 0.9).ok());
  bad = p;
  bad.eps_reg = 0.3;  // window edge not steep enough
  CHECK(validate_hypotheses(bad).find("regularisation")->status == CheckStatus::violated);

  // custom potentials cannot be checked analytically for H5
  ModelParams custom = p;
  custom.custom_potential = std::make_shared<CustomPotential>(CustomPotential{
      [](double r) { return 0.5 * r * r; }, [](double r) { return r; }, [](double) { return 1.0; }});
  custom.theta = 1.0;
  rep = validate_hypotheses(custom);
  REQUIRE(rep.find("H5") != nullptr);
  CHECK(rep.find("H5")->status == CheckStatus::unverifiable);
}
