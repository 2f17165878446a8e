#include "ssr/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "ssr/type1.hpp"
#include "ssr/type2.hpp"

namespace ssr {

std::string coeff_dist_name(CoeffDist d) {
  switch (d) {
    case CoeffDist::SpikesPm1: return "spikes";
    case CoeffDist::Gaussian: return "gaussian";
    case CoeffDist::StudentT3: return "student-t3";
  }
  return "unknown";
}

CoeffDist coeff_dist_from_name(const std::string& name) {
  if (name == "spikes") return CoeffDist::SpikesPm1;
  if (name == "gaussian") return CoeffDist::Gaussian;
  if (name == "student-t3") return CoeffDist::StudentT3;
  throw std::invalid_argument("unknown coefficient distribution: " + name +
                              " (expected spikes, gaussian or student-t3)");
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t child_seed(std::uint64_t master_seed, int k, int trial) {
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ (0x6b79ULL + static_cast<std::uint64_t>(k)));
  s = splitmix64(s ^ (0x7472ULL + static_cast<std::uint64_t>(trial)));
  return s;
}

Problem gen_problem(const ProblemSpec& spec) {
  if (spec.m <= 0 || spec.n <= 0 || spec.n >= spec.m || spec.k > spec.n ||
      spec.k < 0)
    throw std::invalid_argument("gen_problem: need 0 <= k <= n < m");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Problem prob;
  prob.phi.resize(spec.n, spec.m);
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.m; ++j) prob.phi(i, j) = normal(rng);

  // uniform random k-subset by partial Fisher-Yates
  std::vector<int> idx(spec.m);
  for (int i = 0; i < spec.m; ++i) idx[i] = i;
  for (int i = 0; i < spec.k; ++i) {
    std::uniform_int_distribution<int> pick(i, spec.m - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }

  prob.x_gen = VectorXd::Zero(spec.m);
  for (int i = 0; i < spec.k; ++i) {
    double v = 0.0;
    switch (spec.coeff_dist) {
      case CoeffDist::SpikesPm1:
        v = (rng() & 1ULL) ? 1.0 : -1.0;
        break;
      case CoeffDist::Gaussian:
        v = normal(rng);
        break;
      case CoeffDist::StudentT3: {
        std::student_t_distribution<double> t3(3.0);
        v = t3(rng);
        break;
      }
    }
    prob.x_gen[idx[i]] = v;
  }
  prob.y = prob.phi * prob.x_gen;
  return prob;
}

TrialOutcome score(const VectorXd& x_hat, const VectorXd& x_gen) {
  if (x_hat.size() != x_gen.size())
    throw std::invalid_argument("score: length mismatch");
  TrialOutcome out;
  out.linf_err = (x_hat - x_gen).lpNorm<Eigen::Infinity>();
  out.l2_err = (x_hat - x_gen).norm();
  out.success = out.linf_err <= kSuccessLinfThreshold;
  return out;
}

std::vector<std::string> known_algorithm_names() {
  return {"bp", "type2-l1", "rw-l1", "type2-rw-l1", "rw-l2", "type2-rw-l2"};
}

Algorithm make_algorithm(const std::string& name, double noise_var) {
  if (name == "bp") {
    return [](const Problem& p) {
      return basis_pursuit(p.y, p.phi).x_hat;
    };
  }
  if (name == "type2-l1") {
    // fixed lambda = 5
    return [noise_var](const Problem& p) {
      Type2Config cfg;
      cfg.rule = Type2Rule::l1(5.0, false);
      cfg.noise_var = noise_var;
      return em_type2(p.y, p.phi, cfg).x_hat;
    };
  }
  if (name == "rw-l1") {
    return [noise_var](const Problem& p) {
      Type1Config cfg;
      cfg.preset = PriorPreset::reweighted_l1(0.1);
      cfg.noise_var = noise_var;
      return em_type1(p.y, p.phi, cfg).x_hat;
    };
  }
  if (name == "type2-rw-l1") {
    // fixed epsilon = 100, lambda driven by its EM rule
    return [noise_var](const Problem& p) {
      Type2Config cfg;
      cfg.rule = Type2Rule::rel1(100.0, 1.0, true);
      cfg.noise_var = noise_var;
      return em_type2(p.y, p.phi, cfg).x_hat;
    };
  }
  if (name == "rw-l2") {
    return [noise_var](const Problem& p) {
      Type1Config cfg;
      cfg.preset = PriorPreset::reweighted_l2(1.0);  // epsilon schedule from 1
      cfg.noise_var = noise_var;
      cfg.max_outer_iters = 300;  // room for the full epsilon descent
      return em_type1(p.y, p.phi, cfg).x_hat;
    };
  }
  if (name == "type2-rw-l2") {
    // epsilon = 0: the SBL configuration
    return [noise_var](const Problem& p) {
      Type2Config cfg;
      cfg.rule = Type2Rule::rel2(0.0);
      cfg.noise_var = noise_var;
      return em_type2(p.y, p.phi, cfg).x_hat;
    };
  }
  std::string valid;
  for (const auto& n : known_algorithm_names()) valid += " " + n;
  throw std::invalid_argument("unknown algorithm '" + name + "'; valid names:" + valid);
}

int SweepReport::successes(int algo, int ki) const {
  int s = 0;
  for (const auto& t : outcomes[algo][ki]) s += t.success ? 1 : 0;
  return s;
}

double SweepReport::probability(int algo, int ki) const {
  const auto& cell = outcomes[algo][ki];
  return cell.empty() ? 0.0 : static_cast<double>(successes(algo, ki)) / cell.size();
}

double SweepReport::mean_linf(int algo, int ki) const {
  const auto& cell = outcomes[algo][ki];
  if (cell.empty()) return 0.0;
  double s = 0.0;
  for (const auto& t : cell) s += t.linf_err;
  return s / cell.size();
}

double SweepReport::mean_seconds(int algo, int ki) const {
  const auto& cell = outcomes[algo][ki];
  if (cell.empty()) return 0.0;
  double s = 0.0;
  for (const auto& t : cell) s += t.seconds;
  return s / cell.size();
}

int SweepReport::algo_index(const std::string& name) const {
  for (size_t i = 0; i < config.algorithm_names.size(); ++i)
    if (config.algorithm_names[i] == name) return static_cast<int>(i);
  throw std::out_of_range("algorithm not in report: " + name);
}

SweepReport run_sweep(const SweepConfig& cfg) {
  if (cfg.algorithm_names.empty() || cfg.k_values.empty() || cfg.trials < 1)
    throw std::invalid_argument("run_sweep: empty algorithm list, k grid or trials");

  const int n_algos = static_cast<int>(cfg.algorithm_names.size());
  const int n_k = static_cast<int>(cfg.k_values.size());
  std::vector<Algorithm> algos;
  for (const auto& name : cfg.algorithm_names)
    algos.push_back(make_algorithm(name, cfg.noise_var));

  SweepReport report;
  report.config = cfg;
  report.outcomes.assign(
      n_algos, std::vector<std::vector<TrialOutcome>>(
                   n_k, std::vector<TrialOutcome>(cfg.trials)));

  // one task per (k, trial); each task owns its problem and runs every
  // algorithm on it, so results are slot-addressed and order-independent
  const int total = n_k * cfg.trials;
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int task = next.fetch_add(1);
      if (task >= total) return;
      const int ki = task / cfg.trials;
      const int t = task % cfg.trials;
      ProblemSpec spec;
      spec.n = cfg.n;
      spec.m = cfg.m;
      spec.k = cfg.k_values[ki];
      spec.coeff_dist = cfg.coeff_dist;
      spec.seed = child_seed(cfg.master_seed, cfg.k_values[ki], t);
      const Problem prob = gen_problem(spec);
      for (int a = 0; a < n_algos; ++a) {
        TrialOutcome out;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const VectorXd x_hat = algos[a](prob);
          out = score(x_hat, prob.x_gen);
        } catch (const std::exception&) {
          out.success = false;
          out.linf_err = std::numeric_limits<double>::infinity();
          out.l2_err = std::numeric_limits<double>::infinity();
        }
        out.seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        if (out.seconds > cfg.trial_time_limit) out.success = false;
        report.outcomes[a][ki][t] = out;
      }
    }
  };

  int n_threads = cfg.threads > 0
                      ? cfg.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, total));
  std::vector<std::thread> pool;
  for (int i = 0; i < n_threads - 1; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return report;
}

PairedBreakdown paired_compare(const SweepReport& report,
                               const std::string& algo_a,
                               const std::string& algo_b, int k) {
  const int a = report.algo_index(algo_a);
  const int b = report.algo_index(algo_b);
  int ki = -1;
  for (size_t i = 0; i < report.config.k_values.size(); ++i)
    if (report.config.k_values[i] == k) ki = static_cast<int>(i);
  if (ki < 0) throw std::out_of_range("k value not in report grid");

  PairedBreakdown br;
  for (size_t t = 0; t < report.outcomes[a][ki].size(); ++t) {
    const bool sa = report.outcomes[a][ki][t].success;
    const bool sb = report.outcomes[b][ki][t].success;
    if (sa && sb) ++br.both;
    else if (sa) ++br.only_a;
    else if (sb) ++br.only_b;
    else ++br.neither;
  }
  return br;
}

}  // namespace ssr
