#pragma once

#include <string>
#include <vector>

namespace ssr {

struct CheckResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// Analytic self-checks shared by `ssr check` and the test suites.
CheckResult check_mixture_identity();
CheckResult check_weight_consistency(std::uint64_t seed = 42, int samples = 1000);
CheckResult check_posterior_equivalence(std::uint64_t seed = 42, int instances = 100);
CheckResult check_em_monotonicity(std::uint64_t seed = 42, int instances = 50,
                                  int n = 50, int m = 250);
CheckResult check_update_rule_roots(std::uint64_t seed = 42, int samples = 1000);

std::vector<CheckResult> run_all_checks(bool verbose = false);

}  // namespace ssr
