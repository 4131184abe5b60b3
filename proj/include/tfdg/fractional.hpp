#pragma once

#include <span>
#include <vector>

#include "tfdg/mesh.hpp"

namespace tfdg {

/// L1 coefficients of the Caputo derivative on a graded mesh,
///
///   T(n, j) = [(t_n - t_j)^{1-a} - (t_n - t_{j+1})^{1-a}] / (tau_j Gamma(2-a)),
///
/// for 2 <= n <= N+1 and 1 <= j <= n-1 (1-based levels). The triangle is
/// cached up to N = 4096 and evaluated on demand beyond that.
class L1Coefficients {
 public:
  static constexpr int kCacheLimit = 4096;

  L1Coefficients(GradedTimeMesh mesh, double alpha);

  const GradedTimeMesh& mesh() const { return mesh_; }
  double alpha() const { return alpha_; }
  bool cached() const { return !cache_.empty(); }

  /// T(n, j). Returns 0 for j = 0 (the convention used by the theta
  /// recursion).
  double operator()(int n, int j) const;
  /// T(n, n-1), the coefficient multiplying the current level.
  double diag(int n) const { return (*this)(n, n - 1); }

 private:
  double evaluate(int n, int j) const;

  GradedTimeMesh mesh_;
  double alpha_;
  double gamma_2ma_;
  std::vector<double> cache_;
};

L1Coefficients l1_coefficients(const GradedTimeMesh& mesh, double alpha);

/// Weights of the history sum feeding level n:
/// weights[0] = T(n,1) multiplies u^1 and weights[j-1] = T(n,j) - T(n,j-1)
/// multiplies u^j for 2 <= j <= n-1. They telescope to diag.
struct HistoryWeights {
  double diag;
  std::vector<double> weights;
};

HistoryWeights history_weights(const L1Coefficients& c, int n);

/// Caputo derivative of t^g at t: Gamma(g+1)/Gamma(g+1-a) t^{g-a}.
/// Requires g > 0; t = 0 with g < a is unbounded and rejected.
double caputo_power(double alpha, double exponent, double t);

/// Discrete L1 derivative at level n from samples u(t_1), ..., u(t_n).
double l1_apply(const L1Coefficients& c, std::span<const double> samples, int n);

/// Stability multipliers theta(n, j), 1 <= j <= n, 1 <= n <= N+1, with
/// theta(n, n) = 1 and
///
///   theta(n, j) = sum_{k=1}^{n-j} s_{n-k} theta(n-k, j) [T(n,n-k) - T(n,n-k-1)],
///
/// where s_m = 1/T(m, m-1) = Gamma(2-a) tau_{m-1}^a for m >= 2 and
/// s_1 = Gamma(2-a) tau_1^a. T(n, 0) = 0.
class ThetaMultipliers {
 public:
  explicit ThetaMultipliers(const L1Coefficients& c);

  double operator()(int n, int j) const { return values_[offset(n) + (j - 1)]; }
  int levels() const { return levels_; }

  /// tau_{n-1}^a sum_{j=1}^n theta(n, j), the quantity bounded by C T^a.
  double stability_sum(int n) const;

 private:
  static std::size_t offset(int n) { return static_cast<std::size_t>(n - 1) * n / 2; }

  int levels_;
  std::vector<double> values_;
  std::vector<double> tau_pow_;
};

ThetaMultipliers theta_multipliers(const L1Coefficients& c);

}  // namespace tfdg
