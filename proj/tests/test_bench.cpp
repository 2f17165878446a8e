#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "ssr/bench.hpp"
#include "ssr/io.hpp"

using namespace ssr;

TEST_CASE("problem generation") {
  SUBCASE("k = 0 gives the zero signal") {
    ProblemSpec spec;
    spec.n = 10;
    spec.m = 30;
    spec.k = 0;
    const Problem p = gen_problem(spec);
    CHECK(p.x_gen.norm() == 0.0);
    CHECK(p.y.norm() == 0.0);
  }
  SUBCASE("same seed, identical problem") {
    ProblemSpec spec;
    spec.n = 10;
    spec.m = 30;
    spec.k = 4;
    spec.seed = 4242;
    const Problem a = gen_problem(spec);
    const Problem b = gen_problem(spec);
    CHECK((a.phi - b.phi).norm() == 0.0);
    CHECK((a.x_gen - b.x_gen).norm() == 0.0);
    CHECK((a.y - b.y).norm() == 0.0);
  }
  SUBCASE("spike coefficients are exactly +-1") {
    ProblemSpec spec;
    spec.n = 50;
    spec.m = 250;
    spec.k = 13;
    spec.coeff_dist = CoeffDist::SpikesPm1;
    spec.seed = 9;
    const Problem p = gen_problem(spec);
    int nonzeros = 0;
    for (int i = 0; i < 250; ++i) {
      if (p.x_gen[i] != 0.0) {
        ++nonzeros;
        CHECK(std::abs(p.x_gen[i]) == 1.0);
      }
    }
    CHECK(nonzeros == 13);
  }
  SUBCASE("invalid dimensions") {
    ProblemSpec spec;
    spec.n = 30;
    spec.m = 30;  // need n < m
    CHECK_THROWS_AS(gen_problem(spec), std::invalid_argument);
    spec.m = 40;
    spec.k = 31;  // k > n
    CHECK_THROWS_AS(gen_problem(spec), std::invalid_argument);
  }
}

TEST_CASE("generator statistics") {
  ProblemSpec spec;
  spec.n = 400;
  spec.m = 500;
  spec.k = 0;
  spec.seed = 31337;
  const Problem p = gen_problem(spec);  // 2e5 dictionary entries
  const double mean = p.phi.mean();
  const double var = (p.phi.array() - mean).square().mean();
  CHECK(std::abs(mean) <= 0.02);
  CHECK(std::abs(var - 1.0) <= 0.03);

  // heavy-tail smoke test: t(3) kurtosis above the Gaussian draw's
  auto kurtosis = [](const VectorXd& v) {
    const double m1 = v.mean();
    const double m2 = (v.array() - m1).square().mean();
    const double m4 = (v.array() - m1).pow(4).mean();
    return m4 / (m2 * m2);
  };
  ProblemSpec tspec;
  tspec.n = 200;
  tspec.m = 300;
  tspec.k = 200;
  tspec.seed = 5;
  tspec.coeff_dist = CoeffDist::StudentT3;
  VectorXd t_draws(2000), g_draws(2000);
  for (int rep = 0; rep < 10; ++rep) {
    tspec.seed = 50 + rep;
    tspec.coeff_dist = CoeffDist::StudentT3;
    const Problem tp = gen_problem(tspec);
    tspec.coeff_dist = CoeffDist::Gaussian;
    const Problem gp = gen_problem(tspec);
    int idx = 0;
    for (int i = 0; i < 300 && idx < 200; ++i) {
      if (tp.x_gen[i] != 0.0) t_draws[rep * 200 + idx] = tp.x_gen[i];
      if (gp.x_gen[i] != 0.0) g_draws[rep * 200 + idx] = gp.x_gen[i], ++idx;
    }
  }
  CHECK(kurtosis(t_draws) > kurtosis(g_draws));
}

TEST_CASE("spark spot check: random square submatrices are well conditioned") {
  ProblemSpec spec;
  spec.n = 50;
  spec.m = 250;
  spec.k = 0;
  spec.seed = 2718;
  const Problem p = gen_problem(spec);
  std::mt19937_64 rng(100);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<int> cols(250);
    for (int i = 0; i < 250; ++i) cols[i] = i;
    for (int i = 0; i < 50; ++i) {
      std::uniform_int_distribution<int> pick(i, 249);
      std::swap(cols[i], cols[pick(rng)]);
    }
    MatrixXd sub(50, 50);
    for (int i = 0; i < 50; ++i) sub.col(i) = p.phi.col(cols[i]);
    Eigen::JacobiSVD<MatrixXd> svd(sub);
    const double cond = svd.singularValues()(0) / svd.singularValues()(49);
    CHECK(cond < 1e12);
  }
}

TEST_CASE("scoring") {
  VectorXd x = (VectorXd(3) << 1.0, -2.0, 0.0).finished();
  SUBCASE("exact recovery") {
    const TrialOutcome out = score(x, x);
    CHECK(out.success);
    CHECK(out.linf_err == 0.0);
    CHECK(out.l2_err == 0.0);
  }
  SUBCASE("threshold is inclusive") {
    VectorXd off = x;
    off[1] += 1e-3;
    CHECK(score(off, x).success);
    off[1] = x[1] + 2e-3;
    const TrialOutcome out = score(off, x);
    CHECK(!out.success);
    CHECK(out.linf_err == doctest::Approx(2e-3).epsilon(1e-12));
  }
  CHECK_THROWS_AS(score(VectorXd::Zero(2), x), std::invalid_argument);
}

TEST_CASE("algorithm registry") {
  for (const auto& name : known_algorithm_names()) CHECK(make_algorithm(name, 1e-6));
  CHECK_THROWS_WITH_AS(make_algorithm("nope", 1e-6),
                       doctest::Contains("valid names"), std::invalid_argument);
}

TEST_CASE("sweeps") {
  SweepConfig cfg;
  cfg.algorithm_names = {"bp", "type2-rw-l2"};
  cfg.k_values = {0, 1};
  cfg.trials = 3;
  cfg.n = 15;
  cfg.m = 40;
  cfg.master_seed = 99;
  cfg.threads = 2;

  const SweepReport report = run_sweep(cfg);

  SUBCASE("k = 0 always succeeds") {
    for (int a = 0; a < 2; ++a) CHECK(report.probability(a, 0) == 1.0);
  }
  SUBCASE("paired breakdown partitions the trials") {
    const PairedBreakdown br = paired_compare(report, "bp", "type2-rw-l2", 1);
    CHECK(br.both + br.only_a + br.only_b + br.neither == 3);
    const PairedBreakdown same = paired_compare(report, "bp", "bp", 1);
    CHECK(same.only_a == 0);
    CHECK(same.only_b == 0);
  }
  SUBCASE("deterministic across thread counts") {
    SweepConfig cfg1 = cfg;
    cfg1.threads = 1;
    SweepConfig cfg4 = cfg;
    cfg4.threads = 4;
    const std::string csv1 = csv_without_timing(report_to_csv(run_sweep(cfg1)));
    const std::string csv4 = csv_without_timing(report_to_csv(run_sweep(cfg4)));
    CHECK(csv1 == csv4);
  }
  SUBCASE("json round trip preserves probabilities") {
    namespace fs = std::filesystem;
    const auto path = (fs::temp_directory_path() / "ssr_report_test.json").string();
    export_report_json(report, path);
    const SweepReport back = import_report_json(path);
    for (int a = 0; a < 2; ++a)
      for (int ki = 0; ki < 2; ++ki)
        CHECK(back.probability(a, ki) == report.probability(a, ki));
    CHECK(report_to_csv(back) == report_to_csv(report));
    fs::remove(path);
  }
  SUBCASE("csv columns are consistent") {
    const std::string csv = report_to_csv(report);
    CHECK(csv.rfind("algorithm,k,trials,successes,probability,mean_linf,mean_seconds\n",
                    0) == 0);
    // probability column equals successes / trials at full precision
    CHECK(report.probability(0, 1) ==
          static_cast<double>(report.successes(0, 1)) / 3.0);
  }

  CHECK_THROWS_AS(run_sweep(SweepConfig{}), std::invalid_argument);
}

TEST_CASE("child seeds separate cells") {
  CHECK(child_seed(1, 2, 3) != child_seed(1, 2, 4));
  CHECK(child_seed(1, 2, 3) != child_seed(1, 3, 3));
  CHECK(child_seed(1, 2, 3) != child_seed(2, 2, 3));
  CHECK(child_seed(1, 2, 3) == child_seed(1, 2, 3));
}
