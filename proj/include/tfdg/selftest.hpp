#pragma once

#include <string>
#include <vector>

namespace tfdg {

struct SuiteResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// Property suites: quadrature exactness, gamma recurrence, L1 coefficient
/// structure, theta bound, coercivity, norm coincidence, zero-data
/// uniqueness and the manufactured-source residual. Deterministic seeds.
std::vector<SuiteResult> run_selftest();

// Individual suites, exposed for the test binaries.
SuiteResult check_quadrature_exactness();
SuiteResult check_gamma_recurrence();
SuiteResult check_l1_structure();
SuiteResult check_theta_bound();
SuiteResult check_coercivity(int samples = 500);
SuiteResult check_norm_coincidence(int samples = 200);
SuiteResult check_zero_data_uniqueness();
SuiteResult check_manufactured_residual();

/// Upper bound used for max_n tau_{n-1}^a sum_j theta(n, j) / T^a.
inline constexpr double kThetaBoundConstant = 2.0;

}  // namespace tfdg
