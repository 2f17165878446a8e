#include "ssr/checks.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "ssr/bench.hpp"
#include "ssr/priors.hpp"
#include "ssr/type1.hpp"
#include "ssr/type2.hpp"

namespace ssr {

CheckResult check_mixture_identity() {
  CheckResult res{"mixture-identity", 0.0, 1e-6, false};
  const double xs[] = {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 5.0, -5.0};
  const double as[] = {0.5, 1.0, 2.0};
  for (double a : as) {
    for (double x : xs) {
      const double numeric = laplacian_gsm_marginal(x, a);
      const double exact = 0.5 * a * std::exp(-a * std::abs(x));
      res.max_error = std::max(res.max_error, std::abs(numeric - exact));
    }
  }
  res.passed = res.max_error <= res.tolerance;
  return res;
}

CheckResult check_weight_consistency(std::uint64_t seed, int samples) {
  CheckResult res{"weight-consistency", 0.0, 1e-10, false};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < samples; ++i) {
    const double p = (rng() & 1ULL) ? 1.0 : 2.0;
    const double q = 0.1 + 5.0 * unif(rng);
    const double sigma = 0.2 + 3.0 * unif(rng);
    double x = -4.0 + 8.0 * unif(rng);
    if (std::abs(x) < 1e-3) x = 1e-3;
    const GtPrior prior(sigma, p, q);
    // analytic derivative of the GT log-density
    auto dlog = [&](double t) {
      const double sp = std::pow(sigma, p);
      const double sign = t > 0.0 ? 1.0 : -1.0;
      return -(q + 1.0 / p) * p * std::pow(std::abs(t), p - 1.0) * sign /
             (q * sp + std::pow(std::abs(t), p));
    };
    const double via_marginal = weight_from_marginal(x, dlog, p);
    const double closed = gt_weight(x, p, q, sigma);
    res.max_error =
        std::max(res.max_error, std::abs(via_marginal - closed) /
                                    std::max(1.0, std::abs(closed)));
  }
  res.passed = res.max_error <= res.tolerance;
  return res;
}

CheckResult check_posterior_equivalence(std::uint64_t seed, int instances) {
  CheckResult res{"posterior-equivalence", 0.0, 1e-8, false};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.1, 2.0);
  const int n = 10, m = 20;
  for (int inst = 0; inst < instances; ++inst) {
    MatrixXd phi(n, m);
    VectorXd y(n), gamma(m);
    for (int i = 0; i < n; ++i) {
      y[i] = normal(rng);
      for (int j = 0; j < m; ++j) phi(i, j) = normal(rng);
    }
    for (int j = 0; j < m; ++j) gamma[j] = unif(rng);
    const double s2 = 0.5;

    const Posterior post = gaussian_posterior(y, phi, gamma, s2);

    // information-form oracle: Sigma = (G^-1 + Phi^T Phi / s2)^-1
    MatrixXd info = phi.transpose() * phi / s2;
    info.diagonal() += gamma.cwiseInverse();
    const MatrixXd sigma = info.inverse();
    const VectorXd mu = sigma * (phi.transpose() * y) / s2;

    res.max_error = std::max(res.max_error,
                             (post.mu - mu).lpNorm<Eigen::Infinity>());
    res.max_error = std::max(
        res.max_error,
        (post.sigma_diag - sigma.diagonal()).lpNorm<Eigen::Infinity>());
  }
  res.passed = res.max_error <= res.tolerance;
  return res;
}

CheckResult check_em_monotonicity(std::uint64_t seed, int instances, int n,
                                  int m) {
  CheckResult res{"em-monotonicity", 0.0, 1e-9, false};
  const PriorPreset presets[] = {PriorPreset::lasso(0.1),
                                 PriorPreset::reweighted_l1(0.1),
                                 PriorPreset::reweighted_l2(1.0)};
  for (int inst = 0; inst < instances; ++inst) {
    ProblemSpec spec;
    spec.n = n;
    spec.m = m;
    spec.k = 5 + inst % 16;
    spec.coeff_dist = CoeffDist::Gaussian;
    spec.seed = child_seed(seed, spec.k, inst);
    const Problem prob = gen_problem(spec);
    for (const auto& preset : presets) {
      Type1Config cfg;
      cfg.preset = preset;
      cfg.noise_var = 1e-6;
      const Type1Result r = em_type1(prob.y, prob.phi, cfg);
      for (size_t i = 1; i < r.objective_trace.size(); ++i) {
        const double rise = r.objective_trace[i] - r.objective_trace[i - 1];
        const double rel = rise / std::max(1.0, std::abs(r.objective_trace[i - 1]));
        res.max_error = std::max(res.max_error, rel);
      }
    }
  }
  res.passed = res.max_error <= res.tolerance;
  return res;
}

CheckResult check_update_rule_roots(std::uint64_t seed, int samples) {
  CheckResult res{"update-rule-roots", 0.0, 1e-9, false};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto rel = [](double residual, double scale) {
    return std::abs(residual) / std::max(1.0, std::abs(scale));
  };
  for (int i = 0; i < samples; ++i) {
    const double mu = -3.0 + 6.0 * unif(rng);
    const double sii = 2.0 * unif(rng);
    const double lambda = 0.01 + 10.0 * unif(rng);
    const double eps = 0.5 + 100.0 * unif(rng);
    const double s = mu * mu + sii;

    // d/dgamma of the L1-rule Q terms: -1/(2g) + s/(2g^2) - lambda/2 = 0
    {
      const double g = update_gamma_l1(mu, sii, lambda);
      if (g > 0.0) {
        const double resid = -1.0 / (2.0 * g) + s / (2.0 * g * g) - lambda / 2.0;
        res.max_error = std::max(res.max_error, rel(resid, lambda));
      }
    }
    // ReL1 rule: -1/(2g) + s/(2g^2) - lambda^2/2 = 0
    {
      const double g = update_gamma_rel1(mu, sii, lambda);
      if (g > 0.0) {
        const double resid =
            -1.0 / (2.0 * g) + s / (2.0 * g * g) - lambda * lambda / 2.0;
        res.max_error = std::max(res.max_error, rel(resid, lambda * lambda));
      }
    }
    // ReL2 rule: -(eps + 1/2)/g + (s/2 + eps)/g^2 = 0
    {
      const double g = update_gamma_rel2(mu, sii, eps);
      const double resid = -(eps + 0.5) / g + (s / 2.0 + eps) / (g * g);
      res.max_error = std::max(res.max_error, rel(resid, eps));
    }
    // lambda rules against their stationarity equations
    {
      const int m = 250;
      VectorXd gamma(5);
      for (int j = 0; j < 5; ++j) gamma[j] = 0.1 + 50.0 * unif(rng);
      const double l1 = *update_lambda_l1(gamma, m);
      res.max_error =
          std::max(res.max_error, rel(2.0 * m / l1 - gamma.sum(), gamma.sum()));
      const double lr = *update_lambda_rel1(gamma, eps, m);
      const double resid = (2.0 * m + eps - 1.0) / lr - lr * gamma.sum() - eps;
      res.max_error = std::max(res.max_error, rel(resid, 2.0 * m + eps));
    }
  }
  res.passed = res.max_error <= res.tolerance;
  return res;
}

std::vector<CheckResult> run_all_checks(bool verbose) {
  std::vector<CheckResult> results;
  results.push_back(check_mixture_identity());
  results.push_back(check_weight_consistency());
  results.push_back(check_posterior_equivalence());
  results.push_back(check_update_rule_roots());
  results.push_back(check_em_monotonicity());
  if (verbose) {
    for (const auto& r : results)
      std::printf("%-24s max error %.3e (tol %.1e) %s\n", r.name.c_str(),
                  r.max_error, r.tolerance, r.passed ? "ok" : "FAILED");
  }
  return results;
}

}  // namespace ssr
