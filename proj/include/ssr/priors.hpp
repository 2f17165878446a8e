#pragma once

#include <functional>
#include <stdexcept>

namespace ssr {

// Power exponential density p/(2*sigma*Gamma(1/p)) * exp(-(|x|/sigma)^p).
struct PePrior {
  double p;
  double sigma;

  PePrior(double p_, double sigma_) : p(p_), sigma(sigma_) {
    if (p <= 0.0 || sigma <= 0.0)
      throw std::invalid_argument("PePrior: p and sigma must be positive");
  }
};

// Generalized t: eta / (1 + |x|^p / (q sigma^p))^(q + 1/p).
// The normalization constant is cached at construction.
struct GtPrior {
  double sigma;
  double p;
  double q;
  double log_eta;

  GtPrior(double sigma_, double p_, double q_);
};

// Inverse generalized gamma mixing density on (0, inf):
//   eta_g * (sigma/gamma)^(p*q+1) * exp(-(sigma/gamma)^p)
struct GgMixing {
  double p;
  double sigma;
  double q;

  GgMixing(double p_, double sigma_, double q_) : p(p_), sigma(sigma_), q(q_) {
    if (p <= 0.0 || sigma <= 0.0 || q <= 0.0)
      throw std::invalid_argument("GgMixing: all parameters must be positive");
  }
};

// Named Type I configurations. Lasso carries lambda, the reweighted
// variants carry epsilon. The q -> inf limits are realized in closed
// form, never by pushing a huge q through the GT formulas.
struct PriorPreset {
  enum class Kind { Lasso, ReweightedL1, ReweightedL2 };
  Kind kind;
  double param;  // lambda for Lasso, epsilon otherwise

  static PriorPreset lasso(double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("lasso: lambda must be positive");
    return {Kind::Lasso, lambda};
  }
  static PriorPreset reweighted_l1(double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("reweighted_l1: epsilon must be positive");
    return {Kind::ReweightedL1, epsilon};
  }
  static PriorPreset reweighted_l2(double epsilon) {
    if (epsilon < 0.0) throw std::invalid_argument("reweighted_l2: epsilon must be nonnegative");
    return {Kind::ReweightedL2, epsilon};
  }
};

double pe_log_density(double x, const PePrior& prior);
double gt_log_density(double x, const GtPrior& prior);
double gg_log_density(double gamma, const GgMixing& mixing);

// Numerical evaluation of the Gaussian-scale-mixture integral
//   int_0^inf N(x; 0, gamma) (a^2/2) exp(-a^2 gamma / 2) dgamma
// which collapses to the Laplace density (a/2) exp(-a|x|). Kept as a
// verification oracle for the three-layer hierarchy used by type2.
double laplacian_gsm_marginal(double x, double a, double rel_tol = 1e-10);

// Type I E-step weight E[1/gamma^p | x] for the GT prior:
//   (q + 1/p) / (q sigma^p + |x|^p)
double gt_weight(double x, double p, double q, double sigma);

// Generic weight from a marginal's log-density derivative,
//   w(x) = -(d/dx log p(x)) / (p |x|^(p-1) sign(x)),  x != 0.
double weight_from_marginal(double x,
                            const std::function<double(double)>& dlog_density,
                            double p);

// Adaptive quadrature of f over (0, inf), relative tolerance rel_tol.
double integrate_halfline(const std::function<double(double)>& f,
                          double rel_tol = 1e-10);

}  // namespace ssr
