#include "ssr/type2.hpp"

#include <cmath>

namespace ssr {

Posterior gaussian_posterior(const VectorXd& y, const MatrixXd& phi,
                             const VectorXd& gamma, double noise_var) {
  if (phi.rows() != y.size() || phi.cols() != gamma.size())
    throw std::invalid_argument("gaussian_posterior: dimension mismatch");
  if (noise_var <= 0.0)
    throw std::invalid_argument("gaussian_posterior: noise_var must be positive");
  if ((gamma.array() < 0.0).any())
    throw std::invalid_argument("gaussian_posterior: gamma must be nonnegative");

  const int n = static_cast<int>(phi.rows());
  const int m = static_cast<int>(phi.cols());
  Posterior post;
  post.mu = VectorXd::Zero(m);
  post.sigma_diag = VectorXd::Zero(m);
  for (int i = 0; i < m; ++i)
    if (gamma[i] > 0.0) post.active.push_back(i);
  if (post.active.empty()) return post;

  // B = s2 I + Phi_a G_a Phi_a^T, assembled over the active columns only
  MatrixXd b = MatrixXd::Zero(n, n);
  for (int i : post.active)
    b.selfadjointView<Eigen::Lower>().rankUpdate(phi.col(i), gamma[i]);
  b = b.selfadjointView<Eigen::Lower>();
  b.diagonal().array() += noise_var;

  Eigen::LLT<MatrixXd> llt(b);
  if (llt.info() != Eigen::Success) {
    b.diagonal().array() += 1e-12 * b.trace() / n;
    llt.compute(b);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("gaussian_posterior: factorization failed");
  }

  const VectorXd binv_y = llt.solve(y);
  for (int i : post.active) {
    post.mu[i] = gamma[i] * phi.col(i).dot(binv_y);
    const double quad = phi.col(i).dot(llt.solve(phi.col(i)));
    double s = gamma[i] - gamma[i] * gamma[i] * quad;
    post.sigma_diag[i] = std::clamp(s, 0.0, gamma[i]);
  }
  return post;
}

double update_gamma_l1(double mu_i, double sigma_ii, double lambda) {
  if (lambda <= 0.0)
    throw std::invalid_argument("update_gamma_l1: lambda must be positive");
  if (sigma_ii < 0.0)
    throw std::invalid_argument("update_gamma_l1: sigma_ii must be nonnegative");
  const double s = mu_i * mu_i + sigma_ii;
  if (s == 0.0) return 0.0;
  // stable form of (-1 + sqrt(1 + 4 lambda s)) / (2 lambda)
  return 2.0 * s / (1.0 + std::sqrt(1.0 + 4.0 * lambda * s));
}

std::optional<double> update_lambda_l1(const VectorXd& gamma, int m) {
  const double sum = gamma.sum();
  if (sum <= 0.0) return std::nullopt;
  return 2.0 * m / sum;
}

double update_gamma_rel1(double mu_i, double sigma_ii, double lambda) {
  if (lambda <= 0.0)
    throw std::invalid_argument("update_gamma_rel1: lambda must be positive");
  if (sigma_ii < 0.0)
    throw std::invalid_argument("update_gamma_rel1: sigma_ii must be nonnegative");
  const double s = mu_i * mu_i + sigma_ii;
  const double l2 = lambda * lambda;
  if (s == 0.0) return 0.0;
  return 2.0 * s / (1.0 + std::sqrt(1.0 + 4.0 * l2 * s));
}

std::optional<double> update_lambda_rel1(const VectorXd& gamma, double epsilon,
                                         int m) {
  if (epsilon <= 0.0)
    throw std::invalid_argument("update_lambda_rel1: epsilon must be positive");
  if (2.0 * m + epsilon - 1.0 <= 0.0)
    throw std::invalid_argument("update_lambda_rel1: 2M + eps - 1 must be positive");
  const double sum = gamma.sum();
  if (sum <= 0.0) return std::nullopt;
  return (-epsilon +
          std::sqrt(epsilon * epsilon + 4.0 * (2.0 * m + epsilon - 1.0) * sum)) /
         (2.0 * sum);
}

double update_gamma_rel2(double mu_i, double sigma_ii, double epsilon) {
  if (epsilon < 0.0)
    throw std::invalid_argument("update_gamma_rel2: epsilon must be nonnegative");
  if (sigma_ii < 0.0)
    throw std::invalid_argument("update_gamma_rel2: sigma_ii must be nonnegative");
  return (mu_i * mu_i + sigma_ii + 2.0 * epsilon) / (2.0 * epsilon + 1.0);
}

double update_gamma_noninformative(double abs_moment_p, double p) {
  if (abs_moment_p < 0.0 || p <= 0.0)
    throw std::invalid_argument("update_gamma_noninformative: invalid inputs");
  if (p != 2.0)
    throw std::invalid_argument(
        "update_gamma_noninformative: only p = 2 has a closed-form E-step");
  return p * abs_moment_p;
}

Type2Result em_type2(const VectorXd& y, const MatrixXd& phi,
                     const Type2Config& cfg) {
  if (phi.rows() != y.size())
    throw std::invalid_argument("em_type2: dimension mismatch");
  if (cfg.noise_var <= 0.0 || cfg.gamma_init <= 0.0 || cfg.max_iters < 1 ||
      cfg.tol <= 0.0 || cfg.prune_rel_threshold <= 0.0)
    throw std::invalid_argument("em_type2: invalid configuration");

  const int m = static_cast<int>(phi.cols());
  Type2Result res;
  res.gamma = VectorXd::Constant(m, cfg.gamma_init);
  res.lambda = cfg.rule.lambda_init;
  res.x_hat = VectorXd::Zero(m);

  // y = 0 fixes the evidence maximizer at gamma = 0; the iteration would
  // only approach it harmonically, so collapse directly.
  if (y.isZero(0.0)) {
    res.gamma.setZero();
    res.converged = true;
    return res;
  }

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    res.iters = iter + 1;
    const Posterior post = gaussian_posterior(y, phi, res.gamma, cfg.noise_var);
    if (post.active.empty()) {
      res.x_hat.setZero();
      res.converged = true;
      return res;
    }

    VectorXd gamma_new = VectorXd::Zero(m);
    for (int i : post.active) {
      switch (cfg.rule.kind) {
        case Type2Rule::Kind::L1:
          gamma_new[i] = update_gamma_l1(post.mu[i], post.sigma_diag[i], res.lambda);
          break;
        case Type2Rule::Kind::ReL1:
          gamma_new[i] = update_gamma_rel1(post.mu[i], post.sigma_diag[i], res.lambda);
          break;
        case Type2Rule::Kind::ReL2:
          gamma_new[i] = update_gamma_rel2(post.mu[i], post.sigma_diag[i],
                                           cfg.rule.epsilon);
          break;
      }
    }

    if (cfg.rule.update_lambda && cfg.rule.kind != Type2Rule::Kind::ReL2) {
      const auto lam = cfg.rule.kind == Type2Rule::Kind::L1
                           ? update_lambda_l1(gamma_new, m)
                           : update_lambda_rel1(gamma_new, cfg.rule.epsilon, m);
      if (lam) res.lambda = *lam;
    }

    // permanent pruning below a scale-relative threshold
    const double gmax = gamma_new.maxCoeff();
    const double thr = std::max(cfg.prune_rel_threshold * gmax, 1e-12);
    double max_rel_change = 0.0;
    for (int i = 0; i < m; ++i) {
      if (gamma_new[i] < thr) gamma_new[i] = 0.0;
      if (res.gamma[i] > 0.0 && gamma_new[i] > 0.0) {
        max_rel_change = std::max(
            max_rel_change, std::abs(gamma_new[i] - res.gamma[i]) / res.gamma[i]);
      } else if (gamma_new[i] != res.gamma[i]) {
        max_rel_change = std::max(max_rel_change, 1.0);
      }
    }
    res.gamma = gamma_new;
    res.gamma_change_trace.push_back(max_rel_change);
    res.x_hat = post.mu;
    for (int i = 0; i < m; ++i)
      if (res.gamma[i] == 0.0) res.x_hat[i] = 0.0;

    if (max_rel_change < cfg.tol) {
      res.converged = true;
      break;
    }
  }

  // final posterior mean consistent with the last gamma
  const Posterior post = gaussian_posterior(y, phi, res.gamma, cfg.noise_var);
  res.x_hat = post.mu;
  return res;
}

}  // namespace ssr
