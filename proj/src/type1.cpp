#include "ssr/type1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ssr {

namespace {

// Largest eigenvalue of Phi^T Phi by power iteration, slightly inflated
// so the FISTA step stays inside the valid range.
double lipschitz_estimate(const MatrixXd& phi) {
  VectorXd v = VectorXd::Ones(phi.cols());
  v.normalize();
  double lam = 0.0;
  for (int it = 0; it < 20; ++it) {
    VectorXd u = phi.transpose() * (phi * v);
    lam = u.norm();
    if (lam == 0.0) return 0.0;
    v = u / lam;
  }
  return lam * 1.01;
}

double soft(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

double l1_objective(const VectorXd& x, const VectorXd& y, const MatrixXd& phi,
                    const VectorXd& w, double noise_var) {
  return (y - phi * x).squaredNorm() / (2.0 * noise_var) +
         w.cwiseProduct(x.cwiseAbs()).sum();
}

VectorXd preset_weights(const VectorXd& x, const PriorPreset& preset,
                        double epsilon_current) {
  const int m = static_cast<int>(x.size());
  VectorXd w(m);
  switch (preset.kind) {
    case PriorPreset::Kind::Lasso:
      w.setConstant(preset.param);
      break;
    case PriorPreset::Kind::ReweightedL1:
      for (int i = 0; i < m; ++i)
        w[i] = gt_weight(x[i], 1.0, preset.param, 1.0);
      break;
    case PriorPreset::Kind::ReweightedL2: {
      const double eps = epsilon_current;
      for (int i = 0; i < m; ++i)
        w[i] = (eps + 0.5) / (2.0 * eps + x[i] * x[i]);
      break;
    }
  }
  return w;
}

}  // namespace

VectorXd weighted_l2_step(const VectorXd& y, const MatrixXd& phi,
                          const VectorXd& w, double noise_var) {
  if (phi.rows() != y.size() || phi.cols() != w.size())
    throw std::invalid_argument("weighted_l2_step: dimension mismatch");
  if (noise_var <= 0.0)
    throw std::invalid_argument("weighted_l2_step: noise_var must be positive");
  if ((w.array() <= 0.0).any())
    throw std::invalid_argument("weighted_l2_step: weights must be positive");

  const VectorXd c = (2.0 * w.array()).inverse().matrix();
  MatrixXd b = phi * c.asDiagonal() * phi.transpose();
  b.diagonal().array() += noise_var;
  Eigen::LLT<MatrixXd> llt(b);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("weighted_l2_step: N x N system not SPD");
  return c.asDiagonal() * (phi.transpose() * llt.solve(y));
}

VectorXd weighted_l1_step(const VectorXd& y, const MatrixXd& phi,
                          const VectorXd& w, double noise_var,
                          const InnerSolverConfig& cfg, const VectorXd* x0,
                          bool* converged) {
  if (phi.rows() != y.size() || phi.cols() != w.size())
    throw std::invalid_argument("weighted_l1_step: dimension mismatch");
  if (noise_var <= 0.0)
    throw std::invalid_argument("weighted_l1_step: noise_var must be positive");
  if ((w.array() <= 0.0).any())
    throw std::invalid_argument("weighted_l1_step: weights must be positive");

  const double lip = lipschitz_estimate(phi) / noise_var;
  VectorXd x = x0 ? *x0 : VectorXd::Zero(phi.cols());
  if (converged) *converged = true;
  if (lip == 0.0) return x;
  const double step = 1.0 / lip;

  VectorXd z = x;
  double t = 1.0;
  double obj = l1_objective(x, y, phi, w, noise_var);
  bool done = false;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const VectorXd grad = phi.transpose() * (phi * z - y) / noise_var;
    VectorXd x_new(x.size());
    for (int i = 0; i < x.size(); ++i)
      x_new[i] = soft(z[i] - step * grad[i], step * w[i]);
    const double obj_new = l1_objective(x_new, y, phi, w, noise_var);
    if (obj_new > obj) {
      // restart the momentum sequence
      z = x;
      t = 1.0;
      continue;
    }
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = x_new + ((t - 1.0) / t_new) * (x_new - x);
    t = t_new;
    const double change = obj - obj_new;
    x = x_new;
    obj = obj_new;
    if (change <= cfg.tol * (1.0 + std::abs(obj))) {
      done = true;
      break;
    }
  }
  if (converged) *converged = done;
  return x;
}

double type1_objective(const VectorXd& x, const VectorXd& y,
                       const MatrixXd& phi, const PriorPreset& preset,
                       double noise_var, double epsilon_current) {
  if (phi.rows() != y.size() || phi.cols() != x.size())
    throw std::invalid_argument("type1_objective: dimension mismatch");
  double penalty = 0.0;
  switch (preset.kind) {
    case PriorPreset::Kind::Lasso:
      penalty = preset.param * x.lpNorm<1>();
      break;
    case PriorPreset::Kind::ReweightedL1: {
      const double eps = preset.param;
      for (int i = 0; i < x.size(); ++i)
        penalty += (1.0 + eps) * std::log(eps + std::abs(x[i]));
      break;
    }
    case PriorPreset::Kind::ReweightedL2: {
      const double eps = epsilon_current;
      for (int i = 0; i < x.size(); ++i)
        penalty += (eps + 0.5) * std::log(2.0 * eps + x[i] * x[i]);
      break;
    }
  }
  return (y - phi * x).squaredNorm() / (2.0 * noise_var) + penalty;
}

Type1Result em_type1(const VectorXd& y, const MatrixXd& phi,
                     const Type1Config& cfg) {
  if (phi.rows() != y.size())
    throw std::invalid_argument("em_type1: dimension mismatch");
  if (cfg.noise_var <= 0.0 || cfg.max_outer_iters < 1 || cfg.outer_tol <= 0.0)
    throw std::invalid_argument("em_type1: invalid configuration");

  const bool is_rwl2 = cfg.preset.kind == PriorPreset::Kind::ReweightedL2;
  double eps = is_rwl2 ? std::max(cfg.preset.param, 1e-8) : cfg.preset.param;

  Type1Result res;
  res.x_hat = VectorXd::Zero(phi.cols());
  for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
    res.weights = preset_weights(res.x_hat, cfg.preset, eps);
    VectorXd x_new;
    if (is_rwl2) {
      x_new = weighted_l2_step(y, phi, res.weights, cfg.noise_var);
    } else {
      if (cfg.preset.kind == PriorPreset::Kind::ReweightedL1 && outer == 0 &&
          res.x_hat.isZero(0.0)) {
        // Cold start with a small effective penalty converges far too
        // slowly; walk the penalty down from the level where x = 0 is
        // optimal, warm-starting each stage.
        const VectorXd corr = (phi.transpose() * y).cwiseAbs();
        double s0 = 0.0;
        for (int i = 0; i < corr.size(); ++i)
          s0 = std::max(s0, corr[i] / (cfg.noise_var * res.weights[i]));
        for (double s = s0 / 5.0; s > 1.0; s /= 5.0)
          res.x_hat = weighted_l1_step(y, phi, s * res.weights, cfg.noise_var,
                                       cfg.inner, &res.x_hat);
      }
      x_new = weighted_l1_step(y, phi, res.weights, cfg.noise_var, cfg.inner,
                               &res.x_hat);
    }
    const double change = (x_new - res.x_hat).lpNorm<Eigen::Infinity>() /
                          (1.0 + res.x_hat.lpNorm<Eigen::Infinity>());
    res.x_hat = x_new;
    res.outer_iters = outer + 1;
    if (is_rwl2 && change < std::sqrt(eps) / 100.0)
      eps = std::max(eps / 10.0, 1e-8);
    res.objective_trace.push_back(
        type1_objective(res.x_hat, y, phi, cfg.preset, cfg.noise_var, eps));
    if (cfg.preset.kind == PriorPreset::Kind::Lasso) {
      // weights never change: a single l1 regression solves the problem
      res.converged = true;
      break;
    }
    if (change < cfg.outer_tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

BasisPursuitResult basis_pursuit(const VectorXd& y, const MatrixXd& phi,
                                 const BasisPursuitConfig& cfg) {
  if (phi.rows() != y.size())
    throw std::invalid_argument("basis_pursuit: dimension mismatch");
  const int m = static_cast<int>(phi.cols());
  BasisPursuitResult res;
  res.x_hat = VectorXd::Zero(m);
  const double y_norm = y.norm();
  if (y_norm == 0.0) {
    res.converged = true;
    return res;
  }

  const double lambda0 = (phi.transpose() * y).lpNorm<Eigen::Infinity>();
  const double lambda_min = cfg.lambda_min_ratio * lambda0;
  for (double lambda = lambda0; lambda >= lambda_min;
       lambda /= cfg.lambda_shrink) {
    const VectorXd w = VectorXd::Constant(m, lambda);
    res.x_hat = weighted_l1_step(y, phi, w, 1.0, cfg.inner, &res.x_hat);
  }

  // least-squares debias on the detected support
  const double x_max = res.x_hat.cwiseAbs().maxCoeff();
  if (x_max > 0.0) {
    std::vector<int> support;
    for (int i = 0; i < m; ++i)
      if (std::abs(res.x_hat[i]) > 1e-7 * x_max) support.push_back(i);
    if (static_cast<int>(support.size()) > phi.rows()) {
      std::sort(support.begin(), support.end(), [&](int a, int b) {
        return std::abs(res.x_hat[a]) > std::abs(res.x_hat[b]);
      });
      support.resize(phi.rows());
    }
    MatrixXd phi_s(phi.rows(), support.size());
    for (size_t j = 0; j < support.size(); ++j)
      phi_s.col(j) = phi.col(support[j]);
    const VectorXd z = phi_s.colPivHouseholderQr().solve(y);
    VectorXd debiased = VectorXd::Zero(m);
    for (size_t j = 0; j < support.size(); ++j) debiased[support[j]] = z[j];
    if ((y - phi * debiased).norm() <= (y - phi * res.x_hat).norm())
      res.x_hat = debiased;
  }

  res.converged = (y - phi * res.x_hat).norm() <= cfg.residual_tol * y_norm;
  return res;
}

}  // namespace ssr
