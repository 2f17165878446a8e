#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "ssr/bench.hpp"
#include "ssr/checks.hpp"
#include "ssr/io.hpp"
#include "ssr/type1.hpp"
#include "ssr/type2.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitIo = 3;

struct SolveOptions {
  std::string phi_path, y_path, out_path, truth_path;
  std::string algo;
  double sigma2 = 1e-6;
  double eps = -1.0;     // negative = preset default
  double lambda = -1.0;  // negative = preset default
};

// Solve one instance with either a named experiment preset or an
// explicit algorithm family, honoring --eps / --lambda overrides.
Eigen::VectorXd dispatch_solve(const SolveOptions& opt, const ssr::Problem& prob,
                               nlohmann::json& sidecar) {
  using namespace ssr;
  if (opt.algo == "bp") {
    const auto r = basis_pursuit(prob.y, prob.phi);
    sidecar["converged"] = r.converged;
    return r.x_hat;
  }
  if (opt.algo == "lasso" || opt.algo == "rw-l1" || opt.algo == "rw-l2") {
    Type1Config cfg;
    cfg.noise_var = opt.sigma2;
    if (opt.algo == "lasso")
      cfg.preset = PriorPreset::lasso(opt.lambda > 0 ? opt.lambda : 1.0);
    else if (opt.algo == "rw-l1")
      cfg.preset = PriorPreset::reweighted_l1(opt.eps >= 0 ? opt.eps : 0.1);
    else {
      cfg.preset = PriorPreset::reweighted_l2(opt.eps >= 0 ? opt.eps : 1.0);
      cfg.max_outer_iters = 300;  // room for the full epsilon descent
    }
    const auto r = em_type1(prob.y, prob.phi, cfg);
    sidecar["iterations"] = r.outer_iters;
    sidecar["converged"] = r.converged;
    sidecar["objective_trace"] = r.objective_trace;
    return r.x_hat;
  }
  if (opt.algo == "type2-l1" || opt.algo == "type2-rw-l1" ||
      opt.algo == "type2-rw-l2") {
    Type2Config cfg;
    cfg.noise_var = opt.sigma2;
    if (opt.algo == "type2-l1")
      cfg.rule = Type2Rule::l1(opt.lambda > 0 ? opt.lambda : 5.0, false);
    else if (opt.algo == "type2-rw-l1")
      cfg.rule = Type2Rule::rel1(opt.eps > 0 ? opt.eps : 100.0,
                                 opt.lambda > 0 ? opt.lambda : 1.0, true);
    else
      cfg.rule = Type2Rule::rel2(opt.eps >= 0 ? opt.eps : 0.0);
    const auto r = em_type2(prob.y, prob.phi, cfg);
    sidecar["iterations"] = r.iters;
    sidecar["converged"] = r.converged;
    sidecar["lambda"] = r.lambda;
    sidecar["active_gammas"] = (r.gamma.array() > 0.0).count();
    sidecar["gamma_sum"] = r.gamma.sum();
    return r.x_hat;
  }
  throw CLI::ValidationError(
      "--algo", "unknown algorithm '" + opt.algo +
                    "' (valid: bp lasso rw-l1 rw-l2 type2-l1 type2-rw-l1 type2-rw-l2)");
}

int cmd_solve(const SolveOptions& opt) {
  ssr::Problem prob;
  try {
    prob.phi = ssr::read_matrix_csv(opt.phi_path);
    prob.y = ssr::read_vector_csv(opt.y_path);
    if (!opt.truth_path.empty()) prob.x_gen = ssr::read_vector_csv(opt.truth_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  if (prob.phi.rows() != prob.y.size()) {
    std::cerr << "error: phi has " << prob.phi.rows() << " rows but y has "
              << prob.y.size() << " entries\n";
    return kExitValidation;
  }
  if (prob.x_gen.size() != 0 && prob.x_gen.size() != prob.phi.cols()) {
    std::cerr << "error: truth vector length " << prob.x_gen.size()
              << " does not match phi columns " << prob.phi.cols() << "\n";
    return kExitValidation;
  }

  nlohmann::json sidecar;
  Eigen::VectorXd x_hat;
  try {
    x_hat = dispatch_solve(opt, prob, sidecar);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }

  sidecar["algorithm"] = opt.algo;
  sidecar["sigma2"] = opt.sigma2;
  sidecar["residual_l2"] = (prob.y - prob.phi * x_hat).norm();
  if (prob.x_gen.size() != 0) {
    const auto out = ssr::score(x_hat, prob.x_gen);
    sidecar["success"] = out.success;
    sidecar["linf_err"] = out.linf_err;
    sidecar["l2_err"] = out.l2_err;
  }
  try {
    ssr::write_vector_csv(opt.out_path, x_hat);
    std::ofstream js(opt.out_path + ".json");
    if (!js) throw std::runtime_error("cannot open " + opt.out_path + ".json");
    js << sidecar.dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

struct SweepOptions {
  std::string config_path, out_path;
  std::string format = "csv";
  int threads = 0;
  std::optional<std::uint64_t> seed;
};

int cmd_sweep(const SweepOptions& opt) {
  nlohmann::json j;
  try {
    std::ifstream in(opt.config_path);
    if (!in) throw std::runtime_error("cannot open: " + opt.config_path);
    in >> j;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }

  std::vector<std::string> dists;
  ssr::SweepConfig cfg;
  try {
    cfg.algorithm_names = j.at("algorithms").get<std::vector<std::string>>();
    for (const auto& name : cfg.algorithm_names)
      ssr::make_algorithm(name, 1e-6);  // validates the name
    cfg.k_values = j.at("k_values").get<std::vector<int>>();
    cfg.trials = j.value("trials", 100);
    cfg.n = j.value("n", 50);
    cfg.m = j.value("m", 250);
    cfg.master_seed = j.value("master_seed", 0);
    cfg.noise_var = j.value("noise_var", 1e-6);
    cfg.trial_time_limit = j.value("trial_time_limit", 60.0);
    if (j.contains("distributions"))
      dists = j.at("distributions").get<std::vector<std::string>>();
    else
      dists.push_back(j.value("distribution", "gaussian"));
    for (const auto& d : dists) ssr::coeff_dist_from_name(d);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  }
  cfg.threads = opt.threads;
  if (opt.seed) cfg.master_seed = *opt.seed;

  for (const auto& dist_name : dists) {
    cfg.coeff_dist = ssr::coeff_dist_from_name(dist_name);
    ssr::SweepReport report;
    try {
      report = ssr::run_sweep(cfg);
    } catch (const std::exception& e) {
      std::cerr << "numeric failure: " << e.what() << "\n";
      return kExitNumeric;
    }

    std::printf("# distribution: %s\n", dist_name.c_str());
    std::printf("%-14s", "k");
    for (const auto& a : cfg.algorithm_names) std::printf("%14s", a.c_str());
    std::printf("\n");
    for (size_t ki = 0; ki < cfg.k_values.size(); ++ki) {
      std::printf("%-14d", cfg.k_values[ki]);
      for (size_t a = 0; a < cfg.algorithm_names.size(); ++a)
        std::printf("%14.3f", report.probability(static_cast<int>(a),
                                                 static_cast<int>(ki)));
      std::printf("\n");
    }

    std::string path = opt.out_path;
    if (dists.size() > 1) {
      const auto dot = path.rfind('.');
      const std::string tag = "_" + dist_name;
      path = dot == std::string::npos
                 ? path + tag
                 : path.substr(0, dot) + tag + path.substr(dot);
    }
    try {
      if (opt.format == "json")
        ssr::export_report_json(report, path);
      else
        ssr::export_report_csv(report, path);
      std::printf("wrote %s\n", path.c_str());
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitIo;
    }
  }
  return kExitOk;
}

int cmd_check(bool verbose) {
  const auto results = ssr::run_all_checks(false);
  bool all_ok = true;
  for (const auto& r : results) {
    std::printf("%-24s max error %.3e (tol %.1e) %s\n", r.name.c_str(),
                r.max_error, r.tolerance, r.passed ? "ok" : "FAILED");
    all_ok = all_ok && r.passed;
  }
  if (verbose)
    std::printf("%zu checks, %s\n", results.size(),
                all_ok ? "all passed" : "FAILURES present");
  return all_ok ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Type I / Type II Bayesian sparse signal recovery"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "recover x from phi and y given as CSV");
  solve->add_option("--phi", solve_opt.phi_path, "dictionary CSV (one matrix row per line)")
      ->required()->check(CLI::ExistingFile);
  solve->add_option("--y", solve_opt.y_path, "measurement vector CSV (single column)")
      ->required()->check(CLI::ExistingFile);
  solve->add_option("--algo", solve_opt.algo, "algorithm name")->required();
  solve->add_option("--sigma2", solve_opt.sigma2, "effective noise variance");
  solve->add_option("--eps", solve_opt.eps, "epsilon parameter");
  solve->add_option("--lambda", solve_opt.lambda, "lambda parameter");
  solve->add_option("--truth", solve_opt.truth_path, "ground-truth CSV for scoring")
      ->check(CLI::ExistingFile);
  solve->add_option("--out", solve_opt.out_path, "output CSV path")->required();

  SweepOptions sweep_opt;
  auto* sweep = app.add_subcommand("sweep", "run a Monte Carlo phase-transition sweep");
  sweep->add_option("--config", sweep_opt.config_path, "JSON sweep configuration")
      ->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_opt.out_path, "report output path")->required();
  sweep->add_option("--format", sweep_opt.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--threads", sweep_opt.threads, "worker thread cap");
  std::uint64_t seed_value = 0;
  auto* seed_flag = sweep->add_option("--seed", seed_value, "master seed override");

  bool verbose = false;
  auto* check = app.add_subcommand("check", "run the analytic verification suite");
  check->add_flag("-v,--verbose", verbose);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (seed_flag->count() > 0) sweep_opt.seed = seed_value;

  if (solve->parsed()) return cmd_solve(solve_opt);
  if (sweep->parsed()) return cmd_sweep(sweep_opt);
  return cmd_check(verbose);
}
