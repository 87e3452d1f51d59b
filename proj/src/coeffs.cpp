#include "nschc/coeffs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nschc {

namespace {

// Quintic H(s) = s - 6 s^3 + 8 s^4 - 3 s^5 on [0, 1]: H(0) = 0, H'(0) = 1,
// H''(0) = 0 and H = H' = H'' = 0 at s = 1. Its maximum is 48/243 at s = 1/3.
constexpr double kBlendPeak = 48.0 / 243.0;

double blend(double s) { return s * (1.0 + s * s * (-6.0 + s * (8.0 - 3.0 * s))); }
double blend_d1(double s) { return 1.0 + s * s * (-18.0 + s * (32.0 - 15.0 * s)); }
double blend_d2(double s) { return s * (-36.0 + s * (96.0 - 60.0 * s)); }

// Linear profile between f(-1) = lo_value and f(1) = hi_value, extended to R
// by adding slope * w * H(|s|/w) beyond the ends, so the function returns to
// the end value after distance w and stays constant.
struct LinearExtension {
  double at_minus;
  double at_plus;
  double width;

  double slope() const { return 0.5 * (at_plus - at_minus); }

  std::array<double, 3> eval(double r) const {
    const double k = slope();
    if (r >= -1.0 && r <= 1.0) return {0.5 * (at_minus * (1.0 - r) + at_plus * (1.0 + r)), k, 0.0};
    const double s = std::abs(r) - 1.0;
    if (s >= width) return {r > 0 ? at_plus : at_minus, 0.0, 0.0};
    const double t = s / width;
    if (r > 0) return {at_plus + k * width * blend(t), k * blend_d1(t), k * blend_d2(t) / width};
    return {at_minus - k * width * blend(t), k * blend_d1(t), -k * blend_d2(t) / width};
  }

  std::pair<double, double> bounds() const {
    const double overshoot = kBlendPeak * std::abs(slope()) * width;
    return {std::min(at_minus, at_plus) - overshoot, std::max(at_minus, at_plus) + overshoot};
  }
};

// Largest blend width <= 1 that keeps the extension above half its minimum.
double safe_width(double a, double b) {
  const double k = 0.5 * std::abs(b - a);
  if (k == 0.0) return 1.0;
  const double lower = std::min(a, b);
  return std::clamp(0.9 * 0.5 * lower / (kBlendPeak * k), 1e-3, 1.0);
}

LinearExtension density_ext(const ModelParams& p) {
  return {p.rho1, p.rho2, safe_width(p.rho1, p.rho2)};
}
LinearExtension viscosity_ext(const ModelParams& p) {
  return {p.nu1, p.nu2, safe_width(p.nu1, p.nu2)};
}
LinearExtension mobility_ext(const ModelParams& p) {
  return {p.m_star, p.m_star_upper, safe_width(p.m_star, p.m_star_upper)};
}

// Degree-7 polynomial (1 - s)^4 (c0 + c1 s + c2 s^2 + c3 s^3) matching value a0,
// slope a1 and zero second/third derivative at s = 0, and vanishing to third
// order at s = 1.
struct Septic {
  std::array<double, 8> c{};

  Septic(double a0, double a1) {
    const std::array<double, 4> q{a0, a1 + 4.0 * a0, 4.0 * a1 + 10.0 * a0, 10.0 * a1 + 20.0 * a0};
    const std::array<double, 5> w{1.0, -4.0, 6.0, -4.0, 1.0};
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 5; ++k) c[static_cast<std::size_t>(i + k)] += q[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(k)];
  }

  double eval(double s, int order) const {
    double acc = 0.0;
    for (int k = 7; k >= order; --k) {
      double coef = c[static_cast<std::size_t>(k)];
      for (int d = 0; d < order; ++d) coef *= (k - d);
      acc = acc * s + coef;
    }
    return acc;
  }
};

// d^order/dr^order beta(r).
double beta_derivative(double r, const ModelParams& p, int order) {
  const double chi = p.chi;
  if (r >= -1.0 && r <= 1.0) {
    if (order == 0) return chi * (1.0 - r);
    if (order == 1) return -chi;
    return 0.0;
  }
  if (r >= 2.0 || r <= -2.0) return 0.0;
  if (r > 1.0) {
    const Septic right(0.0, -chi);
    return right.eval(r - 1.0, order);
  }
  // s = -1 - r, so d/dr = -d/ds.
  const Septic left(2.0 * chi, chi);
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  return sign * left.eval(-1.0 - r, order);
}

PotentialEval psi0_fh(double r, double theta) {
  if (!(std::abs(r) < 1.0)) throw std::domain_error("Flory-Huggins potential needs |r| < 1");
  PotentialEval e;
  e.value = 0.5 * theta * ((1.0 + r) * std::log1p(r) + (1.0 - r) * std::log1p(-r));
  e.first = theta * std::atanh(r);
  e.second = theta / ((1.0 - r) * (1.0 + r));
  return e;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

double ModelParams::rho_min() const { return std::min(rho1, rho2); }
double ModelParams::rho_max() const { return std::max(rho1, rho2); }

bool operator==(const ModelParams& a, const ModelParams& b) {
  return a.rho1 == b.rho1 && a.rho2 == b.rho2 && a.nu1 == b.nu1 && a.nu2 == b.nu2 &&
         a.m_star == b.m_star && a.m_star_upper == b.m_star_upper && a.theta == b.theta &&
         a.theta0 == b.theta0 && a.chi == b.chi && a.eps_int == b.eps_int &&
         a.eps_reg == b.eps_reg && a.custom_potential == b.custom_potential;
}

double rho(double phi, const ModelParams& p) {
  return p.rho1 * (1.0 - phi) / 2.0 + p.rho2 * (1.0 + phi) / 2.0;
}

double rho_hat(double phi, const ModelParams& p) {
  if (phi >= -1.0 && phi <= 1.0) return rho(phi, p);
  return density_ext(p).eval(phi)[0];
}
double rho_hat_prime(double phi, const ModelParams& p) { return density_ext(p).eval(phi)[1]; }
double rho_hat_second(double phi, const ModelParams& p) { return density_ext(p).eval(phi)[2]; }

PotentialEval psi_fh(double r, double theta, double theta0) {
  PotentialEval e = psi0_fh(r, theta);
  e.value -= 0.5 * theta0 * r * r;
  e.first -= theta0 * r;
  e.second -= theta0;
  return e;
}

PotentialEval psi0(double r, const ModelParams& p) {
  if (p.custom_potential) {
    const auto& c = *p.custom_potential;
    return {c.value(r), c.first(r), c.second(r)};
  }
  return psi0_fh(r, p.theta);
}

PotentialEval psi0_eps(double r, const ModelParams& p) {
  const double edge = 1.0 - p.eps_reg;
  if (std::abs(r) <= edge) return psi0(r, p);
  const double r0 = r > 0 ? edge : -edge;
  const PotentialEval a = psi0(r0, p);
  const double d = r - r0;
  return {a.value + a.first * d + 0.5 * a.second * d * d, a.first + a.second * d, a.second};
}

PotentialEval psi_eps(double r, const ModelParams& p) {
  PotentialEval e = psi0_eps(r, p);
  e.value -= 0.5 * p.theta0 * r * r;
  e.first -= p.theta0 * r;
  e.second -= p.theta0;
  return e;
}

double beta(double r, const ModelParams& p) { return beta_derivative(r, p, 0); }
double beta_prime(double r, const ModelParams& p) { return beta_derivative(r, p, 1); }
double beta_second(double r, const ModelParams& p) { return beta_derivative(r, p, 2); }
double beta_third(double r, const ModelParams& p) { return beta_derivative(r, p, 3); }

double nu(double phi, const ModelParams& p) { return viscosity_ext(p).eval(phi)[0]; }
double nu_prime(double phi, const ModelParams& p) { return viscosity_ext(p).eval(phi)[1]; }
double mobility(double phi, const ModelParams& p) { return mobility_ext(p).eval(phi)[0]; }
double mobility_prime(double phi, const ModelParams& p) { return mobility_ext(p).eval(phi)[1]; }

std::pair<double, double> nu_bounds(const ModelParams& p) { return viscosity_ext(p).bounds(); }
std::pair<double, double> mobility_bounds(const ModelParams& p) { return mobility_ext(p).bounds(); }
std::pair<double, double> rho_hat_bounds(const ModelParams& p) { return density_ext(p).bounds(); }

std::pair<double, double> young_pair(double a, double b) {
  if (a < 0.0 || b < 0.0) throw std::domain_error("young_pair needs a, b >= 0");
  return {std::expm1(a) - a, (b + 1.0) * std::log1p(b) - b};
}

bool ValidationReport::ok() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const HypothesisCheck& c) { return c.status == CheckStatus::violated; });
}

std::vector<HypothesisCheck> ValidationReport::violations() const {
  std::vector<HypothesisCheck> out;
  for (const auto& c : checks)
    if (c.status == CheckStatus::violated) out.push_back(c);
  return out;
}

const HypothesisCheck* ValidationReport::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

ValidationReport validate_hypotheses(const ModelParams& p, std::optional<double> phi_mean) {
  ValidationReport report;
  auto add = [&](std::string id, bool good, std::string detail) {
    report.checks.push_back({std::move(id), good ? CheckStatus::satisfied : CheckStatus::violated,
                             std::move(detail)});
  };
  auto finite = [](std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
  };

  add("density", finite({p.rho1, p.rho2}) && p.rho1 > 0.0 && p.rho2 > 0.0,
      "rho1 = " + num(p.rho1) + ", rho2 = " + num(p.rho2) + " must be positive");

  // (H1): Psi_0'' >= theta > 0, Psi_0(0) = Psi_0'(0) = 0.
  if (!(p.theta > 0.0) || !finite({p.theta, p.theta0})) {
    add("H1", false, "theta = " + num(p.theta) + " must be strictly positive");
  } else if (p.custom_potential) {
    bool good = std::abs(psi0(0.0, p).value) < 1e-12 && std::abs(psi0(0.0, p).first) < 1e-12;
    for (int k = -999; k <= 999 && good; ++k) good = psi0(k / 1000.0, p).second >= p.theta;
    add("H1", good, "sampled Psi_0'' >= theta and Psi_0(0) = Psi_0'(0) = 0");
  } else {
    add("H1", true, "Flory-Huggins: Psi_0'' = theta/(1 - r^2) >= theta");
  }

  // (H2), (H3): positive, bounded, Lipschitz (piecewise polynomial) profiles.
  const auto [nu_lo, nu_hi] = nu_bounds(p);
  add("H2", finite({p.nu1, p.nu2}) && p.nu1 > 0.0 && p.nu2 > 0.0 && nu_lo > 0.0,
      "nu in [" + num(nu_lo) + ", " + num(nu_hi) + "]");
  const auto [m_lo, m_hi] = mobility_bounds(p);
  add("H3", finite({p.m_star, p.m_star_upper}) && p.m_star > 0.0 && p.m_star <= p.m_star_upper && m_lo > 0.0,
      "need 0 < m_* <= m^*; got m_* = " + num(p.m_star) + ", m^* = " + num(p.m_star_upper));

  // (H4): bounded, vanishes for |r| >= 2 by construction.
  add("H4", std::isfinite(p.chi), "beta = chi (1 - r) on [-1, 1], |beta| <= " + num(2.0 * std::abs(p.chi) * 1.1));

  // (H5): Psi_0'' <= C exp(C |Psi_0'|) holds for Flory-Huggins with kappa = 1.
  if (p.custom_potential) {
    report.checks.push_back({"H5", CheckStatus::unverifiable,
                             "growth condition cannot be checked for a user-supplied potential"});
  } else {
    add("H5", true, "Flory-Huggins: satisfied analytically with kappa = 1");
  }

  add("interface", std::isfinite(p.eps_int) && p.eps_int > 0.0, "eps_int = " + num(p.eps_int));

  bool reg_ok = std::isfinite(p.eps_reg) && p.eps_reg > 0.0 && p.eps_reg < 1.0 && p.theta > 0.0;
  std::string reg_detail = "eps_reg = " + num(p.eps_reg);
  if (reg_ok) {
    // eps_reg <= eps_1: the window edges must already be steep enough.
    const PotentialEval hi = psi0(1.0 - p.eps_reg, p);
    const PotentialEval lo = psi0(-1.0 + p.eps_reg, p);
    const double need = 4.0 * std::abs(p.theta0) + 1.0;
    reg_ok = hi.first >= 1.0 && lo.first <= -1.0 && hi.second >= need && lo.second >= need;
    reg_detail += "; Psi_0'(1-eps) = " + num(hi.first) + ", Psi_0''(1-eps) = " + num(hi.second) +
                  " (need >= 1 and >= " + num(need) + ")";
    if (phi_mean) {
      const double cap = 0.5 * (1.0 - std::abs(*phi_mean));
      reg_ok = reg_ok && p.eps_reg <= cap;
      reg_detail += "; cap (1 - |mean phi|)/2 = " + num(cap);
    }
  }
  add("regularisation", reg_ok, reg_detail);
  return report;
}

}  // namespace nschc
