#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace ssr {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class CoeffDist { SpikesPm1, Gaussian, StudentT3 };

std::string coeff_dist_name(CoeffDist d);
CoeffDist coeff_dist_from_name(const std::string& name);

struct ProblemSpec {
  int n = 50;
  int m = 250;
  int k = 0;
  CoeffDist coeff_dist = CoeffDist::Gaussian;
  std::uint64_t seed = 0;
};

struct Problem {
  MatrixXd phi;    // n x m
  VectorXd x_gen;  // exactly k nonzeros
  VectorXd y;      // phi * x_gen
};

struct TrialOutcome {
  bool success = false;
  double linf_err = 0.0;
  double l2_err = 0.0;
  double seconds = 0.0;
};

// ||x_gen - x_hat||_inf <= 1e-3 counts as success (inclusive).
inline constexpr double kSuccessLinfThreshold = 1e-3;

TrialOutcome score(const VectorXd& x_hat, const VectorXd& x_gen);

// Solver under benchmark: maps a problem to a coefficient estimate.
using Algorithm = std::function<VectorXd(const Problem&)>;

struct SweepConfig {
  std::vector<std::string> algorithm_names;
  std::vector<int> k_values;
  int trials = 100;
  int n = 50;
  int m = 250;
  CoeffDist coeff_dist = CoeffDist::Gaussian;
  std::uint64_t master_seed = 0;
  int threads = 0;              // 0 = hardware concurrency
  double trial_time_limit = 60; // seconds; overruns are recorded as failures
  double noise_var = 1e-6;      // effective sigma^2 handed to the solvers
};

struct SweepReport {
  SweepConfig config;
  // outcomes[a][ki][t]: algorithm a, k-grid index ki, trial t
  std::vector<std::vector<std::vector<TrialOutcome>>> outcomes;

  int successes(int algo, int ki) const;
  double probability(int algo, int ki) const;
  double mean_linf(int algo, int ki) const;
  double mean_seconds(int algo, int ki) const;
  int algo_index(const std::string& name) const;
};

struct PairedBreakdown {
  int both = 0;
  int only_a = 0;
  int only_b = 0;
  int neither = 0;
};

std::uint64_t child_seed(std::uint64_t master_seed, int k, int trial);

Problem gen_problem(const ProblemSpec& spec);

// The six configurations of the experiments section, keyed by name:
// bp, type2-l1, rw-l1, type2-rw-l1, rw-l2, type2-rw-l2.
Algorithm make_algorithm(const std::string& name, double noise_var);
std::vector<std::string> known_algorithm_names();

SweepReport run_sweep(const SweepConfig& cfg);

PairedBreakdown paired_compare(const SweepReport& report,
                               const std::string& algo_a,
                               const std::string& algo_b, int k);

}  // namespace ssr
