#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ssr {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Type2Rule {
  enum class Kind { L1, ReL1, ReL2 };
  Kind kind;
  double epsilon = 0.0;      // ReL1 / ReL2
  double lambda_init = 1.0;  // L1 / ReL1
  bool update_lambda = false;

  static Type2Rule l1(double lambda, bool update = false) {
    if (lambda <= 0.0) throw std::invalid_argument("l1 rule: lambda must be positive");
    return {Kind::L1, 0.0, lambda, update};
  }
  static Type2Rule rel1(double epsilon, double lambda_init = 1.0, bool update = true) {
    if (epsilon <= 0.0) throw std::invalid_argument("rel1 rule: epsilon must be positive");
    if (lambda_init <= 0.0) throw std::invalid_argument("rel1 rule: lambda_init must be positive");
    return {Kind::ReL1, epsilon, lambda_init, update};
  }
  static Type2Rule rel2(double epsilon) {
    if (epsilon < 0.0) throw std::invalid_argument("rel2 rule: epsilon must be nonnegative");
    return {Kind::ReL2, epsilon, 1.0, false};
  }
};

struct Type2Config {
  Type2Rule rule = Type2Rule::rel2(0.0);
  double noise_var = 1e-6;
  double gamma_init = 1.0;
  double prune_rel_threshold = 1e-8;  // relative to max(gamma), floor 1e-12
  int max_iters = 1000;
  double tol = 1e-8;  // max relative gamma change
};

struct Posterior {
  VectorXd mu;
  VectorXd sigma_diag;
  std::vector<int> active;
};

struct Type2Result {
  VectorXd x_hat;
  VectorXd gamma;
  double lambda = 0.0;
  int iters = 0;
  bool converged = false;
  std::vector<double> gamma_change_trace;
};

// mu = G Phi^T (s2 I + Phi G Phi^T)^{-1} y and the diagonal of
// Sigma = G - G Phi^T (s2 I + Phi G Phi^T)^{-1} Phi G, G = diag(gamma).
// Coordinates with gamma_i = 0 come back exactly zero.
Posterior gaussian_posterior(const VectorXd& y, const MatrixXd& phi,
                             const VectorXd& gamma, double noise_var);

// Table II update rules; s = mu_i^2 + Sigma_ii throughout. The lambda
// updates return nullopt when every gamma_i is zero (fully pruned model,
// a terminal state rather than an arithmetic error).
double update_gamma_l1(double mu_i, double sigma_ii, double lambda);
std::optional<double> update_lambda_l1(const VectorXd& gamma, int m);
double update_gamma_rel1(double mu_i, double sigma_ii, double lambda);
std::optional<double> update_lambda_rel1(const VectorXd& gamma, double epsilon, int m);
double update_gamma_rel2(double mu_i, double sigma_ii, double epsilon);

// Non-informative hyperprior update gamma = p * <|x|^p>; only p = 2 has
// a closed-form E-step.
double update_gamma_noninformative(double abs_moment_p, double p);

Type2Result em_type2(const VectorXd& y, const MatrixXd& phi,
                     const Type2Config& cfg);

}  // namespace ssr
