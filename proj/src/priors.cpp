#include "ssr/priors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>

namespace ssr {

namespace {

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace

GtPrior::GtPrior(double sigma_, double p_, double q_)
    : sigma(sigma_), p(p_), q(q_) {
  if (sigma <= 0.0 || p <= 0.0 || q <= 0.0)
    throw std::invalid_argument("GtPrior: sigma, p, q must be positive");
  // eta = p / (2 sigma q^(1/p) B(1/p, q)), from the substitution
  // t = |x|^p / (q sigma^p).
  log_eta = std::log(p) - std::log(2.0) - std::log(sigma) -
            std::log(q) / p - log_beta(1.0 / p, q);
}

double pe_log_density(double x, const PePrior& prior) {
  const double p = prior.p;
  const double s = prior.sigma;
  return std::log(p) - std::log(2.0 * s) - std::lgamma(1.0 / p) -
         std::pow(std::abs(x) / s, p);
}

double gt_log_density(double x, const GtPrior& prior) {
  const double t = std::pow(std::abs(x), prior.p) /
                   (prior.q * std::pow(prior.sigma, prior.p));
  return prior.log_eta - (prior.q + 1.0 / prior.p) * std::log1p(t);
}

double gg_log_density(double gamma, const GgMixing& mixing) {
  if (gamma <= 0.0)
    throw std::invalid_argument("gg_log_density: gamma must be positive");
  const double r = mixing.sigma / gamma;
  // Normalizer: int_0^inf (s/g)^(pq+1) exp(-(s/g)^p) dg = s Gamma(q) / p.
  const double log_norm =
      std::log(mixing.sigma) + std::lgamma(mixing.q) - std::log(mixing.p);
  return (mixing.p * mixing.q + 1.0) * std::log(r) - std::pow(r, mixing.p) -
         log_norm;
}

double integrate_halfline(const std::function<double(double)>& f,
                          double rel_tol) {
  boost::math::quadrature::exp_sinh<double> integrator;
  double error = 0.0;
  double value = integrator.integrate(f, rel_tol, &error);
  if (!std::isfinite(value))
    throw std::runtime_error("integrate_halfline: quadrature did not converge");
  return value;
}

double laplacian_gsm_marginal(double x, double a, double rel_tol) {
  if (a <= 0.0)
    throw std::invalid_argument("laplacian_gsm_marginal: a must be positive");
  // gamma = u^2 removes the 1/sqrt(gamma) endpoint singularity.
  const double c = a * a / 2.0;
  const double x2 = x * x;
  auto integrand = [&](double u) {
    const double u2 = u * u;
    double expo = -c * u2;
    if (x2 > 0.0) {
      if (u2 == 0.0) return 0.0;  // limit as u -> 0 for x != 0
      expo -= x2 / (2.0 * u2);
    }
    return std::sqrt(2.0 / M_PI) * c * std::exp(expo);
  };
  return integrate_halfline(integrand, rel_tol);
}

double gt_weight(double x, double p, double q, double sigma) {
  if (p <= 0.0 || q <= 0.0 || sigma <= 0.0)
    throw std::invalid_argument("gt_weight: p, q, sigma must be positive");
  return (q + 1.0 / p) / (q * std::pow(sigma, p) + std::pow(std::abs(x), p));
}

double weight_from_marginal(double x,
                            const std::function<double(double)>& dlog_density,
                            double p) {
  if (p <= 0.0)
    throw std::invalid_argument("weight_from_marginal: p must be positive");
  if (x == 0.0)
    throw std::invalid_argument(
        "weight_from_marginal: x = 0 requires the closed-form limit");
  const double sign = x > 0.0 ? 1.0 : -1.0;
  return -dlog_density(x) / (p * std::pow(std::abs(x), p - 1.0) * sign);
}

}  // namespace ssr
