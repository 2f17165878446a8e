#include <doctest.h>

#include <cmath>
#include <random>

#include "ssr/bench.hpp"
#include "ssr/type2.hpp"

using namespace ssr;

namespace {

MatrixXd random_matrix(int n, int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd phi(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) phi(i, j) = normal(rng);
  return phi;
}

}  // namespace

TEST_CASE("gaussian posterior") {
  SUBCASE("all-zero gamma pins everything at zero") {
    const MatrixXd phi = MatrixXd::Identity(3, 3);
    const Posterior post =
        gaussian_posterior(VectorXd::Ones(3), phi, VectorXd::Zero(3), 1.0);
    CHECK(post.mu.norm() == 0.0);
    CHECK(post.sigma_diag.norm() == 0.0);
    CHECK(post.active.empty());
  }
  SUBCASE("scalar case") {
    const MatrixXd phi = MatrixXd::Identity(2, 2);
    const VectorXd y = (VectorXd(2) << 2.0, -2.0).finished();
    const Posterior post = gaussian_posterior(y, phi, VectorXd::Ones(2), 1.0);
    CHECK(post.mu[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(post.mu[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(post.sigma_diag[0] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("matches the information form and stays within bounds") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.05, 2.0);
    for (int inst = 0; inst < 20; ++inst) {
      const MatrixXd phi = random_matrix(10, 20, rng);
      VectorXd y(10), gamma(20);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int i = 0; i < 10; ++i) y[i] = normal(rng);
      for (int j = 0; j < 20; ++j) gamma[j] = unif(rng);
      const double s2 = 0.4;
      const Posterior post = gaussian_posterior(y, phi, gamma, s2);

      MatrixXd info = phi.transpose() * phi / s2;
      info.diagonal() += gamma.cwiseInverse();
      const MatrixXd sigma = info.inverse();
      const VectorXd mu = sigma * (phi.transpose() * y) / s2;
      CHECK((post.mu - mu).lpNorm<Eigen::Infinity>() <= 1e-8);
      CHECK((post.sigma_diag - sigma.diagonal()).lpNorm<Eigen::Infinity>() <= 1e-8);
      for (int j = 0; j < 20; ++j) {
        CHECK(post.sigma_diag[j] >= 0.0);
        CHECK(post.sigma_diag[j] <= gamma[j]);
      }
    }
  }
  SUBCASE("pruned coordinates are exactly zero") {
    std::mt19937_64 rng(12);
    const MatrixXd phi = random_matrix(5, 10, rng);
    VectorXd gamma = VectorXd::Ones(10);
    gamma[3] = 0.0;
    gamma[7] = 0.0;
    const Posterior post =
        gaussian_posterior(VectorXd::Ones(5), phi, gamma, 0.5);
    CHECK(post.mu[3] == 0.0);
    CHECK(post.sigma_diag[7] == 0.0);
    CHECK(post.active.size() == 8);
  }
}

TEST_CASE("Table II gamma updates") {
  SUBCASE("l1 rule") {
    CHECK(update_gamma_l1(std::sqrt(2.0), 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(update_gamma_l1(0.0, 0.0, 3.0) == 0.0);
    CHECK(update_gamma_l1(std::sqrt(2.0), 0.0, 1e-9) == doctest::Approx(2.0).epsilon(1e-6));
    // shrinking limits
    CHECK(update_gamma_l1(1.0, 1.0, 1e9) <= 1e-4);
    CHECK(update_gamma_l1(1.0, 1.0, 1e-9) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_THROWS_AS(update_gamma_l1(1.0, 0.0, 0.0), std::invalid_argument);
  }
  SUBCASE("rel1 rule") {
    CHECK(update_gamma_rel1(std::sqrt(2.0), 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(update_gamma_rel1(0.0, 0.0, 2.0) == 0.0);
    // s = 6, lambda = 0.5: (-1 + sqrt(7)) / 0.5
    CHECK(update_gamma_rel1(std::sqrt(6.0), 0.0, 0.5) ==
          doctest::Approx(2.0 * (std::sqrt(7.0) - 1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(update_gamma_rel1(1.0, 0.0, -1.0), std::invalid_argument);
  }
  SUBCASE("rel2 rule") {
    CHECK(update_gamma_rel2(std::sqrt(0.3), 0.0, 0.0) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(update_gamma_rel2(0.0, 0.0, 0.0) == 0.0);
    CHECK(update_gamma_rel2(1.0, 0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(update_gamma_rel2(1.0, 0.0, -0.1), std::invalid_argument);
  }
  SUBCASE("non-informative update") {
    CHECK(update_gamma_noninformative(0.3, 2.0) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(update_gamma_noninformative(0.0, 2.0) == 0.0);
    CHECK_THROWS_AS(update_gamma_noninformative(0.5, 1.0), std::invalid_argument);
  }
}

TEST_CASE("Table II lambda updates") {
  SUBCASE("l1 rule") {
    VectorXd gamma = VectorXd::Constant(4, 25.0);  // sum = 100
    CHECK(*update_lambda_l1(gamma, 250) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(*update_lambda_l1(VectorXd::Constant(1, 2.0), 1) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!update_lambda_l1(VectorXd::Zero(3), 10).has_value());
  }
  SUBCASE("rel1 rule satisfies its stationarity equation") {
    VectorXd gamma = VectorXd::Constant(1, 599.0);
    const double lam = *update_lambda_rel1(gamma, 100.0, 250);
    const double resid = (2.0 * 250 + 100.0 - 1.0) / lam - lam * 599.0 - 100.0;
    CHECK(std::abs(resid) <= 1e-9 * (2.0 * 250 + 100.0));

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      VectorXd g(5);
      for (int j = 0; j < 5; ++j) g[j] = 0.01 + 100.0 * unif(rng);
      const double eps = 0.5 + 200.0 * unif(rng);
      const int m = 250;
      const double l = *update_lambda_rel1(g, eps, m);
      const double r = (2.0 * m + eps - 1.0) / l - l * g.sum() - eps;
      CHECK(std::abs(r) <= 1e-9 * (2.0 * m + eps));
    }
    // large sum(gamma) drives lambda to zero
    CHECK(*update_lambda_rel1(VectorXd::Constant(1, 1e12), 100.0, 250) <= 1e-3);
    CHECK(!update_lambda_rel1(VectorXd::Zero(2), 100.0, 250).has_value());
  }
}

TEST_CASE("em_type2") {
  SUBCASE("zero measurements collapse to zero") {
    std::mt19937_64 rng(14);
    const MatrixXd phi = random_matrix(5, 12, rng);
    Type2Config cfg;
    cfg.rule = Type2Rule::rel2(0.0);
    const Type2Result r = em_type2(VectorXd::Zero(5), phi, cfg);
    CHECK(r.x_hat.norm() == 0.0);
    CHECK(r.converged);
  }
  SUBCASE("SBL recovers a 1-sparse signal at 20x50") {
    int successes = 0;
    for (int seed = 0; seed < 50; ++seed) {
      ProblemSpec spec;
      spec.n = 20;
      spec.m = 50;
      spec.k = 1;
      spec.coeff_dist = CoeffDist::Gaussian;
      spec.seed = child_seed(123, 1, seed);
      const Problem prob = gen_problem(spec);
      Type2Config cfg;
      cfg.rule = Type2Rule::rel2(0.0);
      const Type2Result r = em_type2(prob.y, prob.phi, cfg);
      if ((r.x_hat - prob.x_gen).lpNorm<Eigen::Infinity>() <= 1e-3) ++successes;
    }
    CHECK(successes >= 49);
  }
  SUBCASE("SBL gamma sequence matches mu^2 + Sigma_ii exactly") {
    std::mt19937_64 rng(15);
    const MatrixXd phi = random_matrix(8, 16, rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    VectorXd y(8);
    for (int i = 0; i < 8; ++i) y[i] = normal(rng);
    Type2Config cfg;
    cfg.rule = Type2Rule::rel2(0.0);
    cfg.max_iters = 1;
    const Type2Result r = em_type2(y, phi, cfg);
    const Posterior post =
        gaussian_posterior(y, phi, VectorXd::Ones(16), cfg.noise_var);
    for (int i = 0; i < 16; ++i) {
      const double expect = post.mu[i] * post.mu[i] + post.sigma_diag[i];
      if (r.gamma[i] > 0.0) CHECK(r.gamma[i] == expect);
    }
  }
  SUBCASE("pruning is permanent and x_hat is supported on gamma") {
    std::mt19937_64 rng(16);
    ProblemSpec spec;
    spec.n = 15;
    spec.m = 40;
    spec.k = 3;
    spec.seed = 777;
    const Problem prob = gen_problem(spec);
    Type2Config cfg;
    cfg.rule = Type2Rule::rel2(0.0);
    const Type2Result r = em_type2(prob.y, prob.phi, cfg);
    for (int i = 0; i < 40; ++i) {
      CHECK(r.gamma[i] >= 0.0);
      if (r.gamma[i] == 0.0) CHECK(r.x_hat[i] == 0.0);
    }
    // rerunning with a larger cap keeps every previously pruned index pruned
    Type2Config more = cfg;
    more.max_iters = cfg.max_iters + 100;
    const Type2Result r2 = em_type2(prob.y, prob.phi, more);
    for (int i = 0; i < 40; ++i)
      if (r.gamma[i] == 0.0 && r.converged) CHECK(r2.gamma[i] == 0.0);
  }
  SUBCASE("invalid configuration") {
    Type2Config cfg;
    cfg.noise_var = 0.0;
    CHECK_THROWS_AS(em_type2(VectorXd::Ones(2), MatrixXd::Identity(2, 2), cfg),
                    std::invalid_argument);
  }
}
