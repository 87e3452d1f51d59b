#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nschc {

/// Plug-in hook for a singular potential other than Flory-Huggins. Only the
/// convex part Psi_0 is supplied; the -theta0 r^2 / 2 term is added as usual.
struct CustomPotential {
  std::function<double(double)> value;
  std::function<double(double)> first;
  std::function<double(double)> second;
};

struct ModelParams {
  double rho1 = 1.0;          // density of fluid 1 (phi = -1)
  double rho2 = 1.0;          // density of fluid 2 (phi = +1)
  double nu1 = 1.0;           // viscosity of fluid 1
  double nu2 = 1.0;           // viscosity of fluid 2
  double m_star = 1.0;        // mobility at phi = -1 (lower bound)
  double m_star_upper = 1.0;  // mobility at phi = +1 (upper bound)
  double theta = 1.0;         // Flory-Huggins temperature
  double theta0 = 2.0;        // critical temperature; theta < theta0 gives a double well
  double chi = 0.0;           // chemotaxis strength in beta(r) = chi (1 - r)
  double eps_int = 1.0;       // interface parameter
  double eps_reg = 1e-4;      // regularisation width of the logarithmic potential
  std::shared_ptr<const CustomPotential> custom_potential;

  double rho_min() const;
  double rho_max() const;

  friend bool operator==(const ModelParams& a, const ModelParams& b);
};

/// Value and first two derivatives of a potential at a point.
struct PotentialEval {
  double value = 0.0;
  double first = 0.0;
  double second = 0.0;
};

/// Linear density rho(phi) = rho1 (1 - phi)/2 + rho2 (1 + phi)/2.
double rho(double phi, const ModelParams& p);

/// Bounded C^2 extension of rho: equal to rho on [-1, 1], constant for
/// |phi| >= 2, within [rho_min/2, 2 rho_max] everywhere.
double rho_hat(double phi, const ModelParams& p);
double rho_hat_prime(double phi, const ModelParams& p);
double rho_hat_second(double phi, const ModelParams& p);

/// Flory-Huggins potential, |r| < 1; throws std::domain_error otherwise.
PotentialEval psi_fh(double r, double theta, double theta0);

/// Convex part Psi_0 (theta0 = 0) of the configured potential, unregularised.
PotentialEval psi0(double r, const ModelParams& p);

/// Regularised convex part Psi_{0,eps}: Psi_0 on [-1+eps, 1-eps], second-order
/// Taylor continuation outside. Defined on all of R.
PotentialEval psi0_eps(double r, const ModelParams& p);

/// Regularised potential Psi_eps = Psi_{0,eps} - theta0 r^2 / 2.
PotentialEval psi_eps(double r, const ModelParams& p);

/// Interaction function: chi (1 - r) on [-1, 1], C^3 septic blends to zero on
/// [1, 2] and [-2, -1], zero beyond.
double beta(double r, const ModelParams& p);
double beta_prime(double r, const ModelParams& p);
double beta_second(double r, const ModelParams& p);
double beta_third(double r, const ModelParams& p);

/// Viscosity and mobility: linear between the two fluid values on [-1, 1],
/// C^2 blend back to the end value on [1, 2], constant beyond.
double nu(double phi, const ModelParams& p);
double nu_prime(double phi, const ModelParams& p);
double mobility(double phi, const ModelParams& p);
double mobility_prime(double phi, const ModelParams& p);

/// Global [lower, upper] bounds of nu and m over R.
std::pair<double, double> nu_bounds(const ModelParams& p);
std::pair<double, double> mobility_bounds(const ModelParams& p);
/// Global [lower, upper] bounds of rho_hat over R.
std::pair<double, double> rho_hat_bounds(const ModelParams& p);

/// Generalised Young pair f(a) = e^a - a - 1, g(b) = (b+1) ln(b+1) - b, with
/// a b <= f(a) + g(b) for a, b >= 0. Throws std::domain_error for negatives.
std::pair<double, double> young_pair(double a, double b);

enum class CheckStatus { satisfied, violated, unverifiable };

struct HypothesisCheck {
  std::string id;  // "H1".."H5", "density", "interface", "regularisation"
  CheckStatus status = CheckStatus::satisfied;
  std::string detail;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;

  bool ok() const;
  std::vector<HypothesisCheck> violations() const;
  const HypothesisCheck* find(const std::string& id) const;
};

/// Checks the structural hypotheses on the parameters. If the initial mean
/// of phi is known, eps_reg is also checked against (1 - |mean|)/2.
ValidationReport validate_hypotheses(const ModelParams& p,
                                     std::optional<double> phi_mean = std::nullopt);

}  // namespace nschc
