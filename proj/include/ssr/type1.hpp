#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ssr/priors.hpp"

namespace ssr {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct InnerSolverConfig {
  int max_iters = 2000;
  double tol = 1e-10;          // relative objective change
  bool backtracking = false;   // default: fixed step from a Lipschitz estimate
};

struct Type1Config {
  PriorPreset preset = PriorPreset::lasso(1.0);
  double noise_var = 1e-6;
  int max_outer_iters = 30;
  double outer_tol = 1e-6;
  InnerSolverConfig inner;
};

struct Type1Result {
  VectorXd x_hat;
  VectorXd weights;
  std::vector<double> objective_trace;
  int outer_iters = 0;
  bool converged = false;
};

struct BasisPursuitConfig {
  double lambda_shrink = 5.0;
  double lambda_min_ratio = 1e-10;  // lambda_min = ratio * ||Phi^T y||_inf
  double residual_tol = 1e-6;       // target ||y - Phi x|| <= tol * ||y||
  InnerSolverConfig inner{1500, 1e-12, false};
};

struct BasisPursuitResult {
  VectorXd x_hat;
  bool converged = false;
};

// Minimizer of (1/2s2)||y - Phi x||^2 + sum_i w_i x_i^2 through the
// N x N system x = C Phi^T (Phi C Phi^T + s2 I)^{-1} y, C = diag(1/(2w)).
VectorXd weighted_l2_step(const VectorXd& y, const MatrixXd& phi,
                          const VectorXd& w, double noise_var);

// FISTA for (1/2s2)||y - Phi x||^2 + sum_i w_i |x_i|, warm started at x0.
VectorXd weighted_l1_step(const VectorXd& y, const MatrixXd& phi,
                          const VectorXd& w, double noise_var,
                          const InnerSolverConfig& cfg,
                          const VectorXd* x0 = nullptr,
                          bool* converged = nullptr);

// Penalized objective matching the EM majorization of each preset; used
// for monotonicity monitoring.
double type1_objective(const VectorXd& x, const VectorXd& y,
                       const MatrixXd& phi, const PriorPreset& preset,
                       double noise_var, double epsilon_current);

Type1Result em_type1(const VectorXd& y, const MatrixXd& phi,
                     const Type1Config& cfg);

BasisPursuitResult basis_pursuit(const VectorXd& y, const MatrixXd& phi,
                                 const BasisPursuitConfig& cfg = {});

}  // namespace ssr
