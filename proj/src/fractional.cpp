#include "tfdg/fractional.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tfdg/errors.hpp"
#include "tfdg/quadrature.hpp"

namespace tfdg {

namespace {

std::size_t triangle_offset(int n) { return static_cast<std::size_t>(n - 2) * (n - 1) / 2; }

}  // namespace

L1Coefficients::L1Coefficients(GradedTimeMesh mesh, double alpha) : mesh_(std::move(mesh)), alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ArgumentError("l1_coefficients: alpha must lie in (0, 1), got " + std::to_string(alpha));
  gamma_2ma_ = gamma(2.0 - alpha);
  const int levels = mesh_.levels();
  if (mesh_.steps() <= kCacheLimit) {
    cache_.resize(triangle_offset(levels + 1));
    for (int n = 2; n <= levels; ++n)
      for (int j = 1; j <= n - 1; ++j) cache_[triangle_offset(n) + (j - 1)] = evaluate(n, j);
  }
}

double L1Coefficients::evaluate(int n, int j) const {
  // A^e - (A - tau)^e = -A^e expm1(e log1p(-tau/A)), no cancellation for tiny tau.
  const double tau = mesh_.step(j);
  const double A = mesh_.time(n) - mesh_.time(j);
  const double e = 1.0 - alpha_;
  const double diff = j == n - 1 ? std::pow(tau, e) : -std::pow(A, e) * std::expm1(e * std::log1p(-tau / A));
  return diff / (tau * gamma_2ma_);
}

double L1Coefficients::operator()(int n, int j) const {
  if (n < 2 || n > mesh_.levels() || j < 0 || j > n - 1)
    throw ArgumentError("L1Coefficients: index (" + std::to_string(n) + ", " + std::to_string(j) +
                        ") out of range");
  if (j == 0) return 0.0;
  return cached() ? cache_[triangle_offset(n) + (j - 1)] : evaluate(n, j);
}

L1Coefficients l1_coefficients(const GradedTimeMesh& mesh, double alpha) { return L1Coefficients(mesh, alpha); }

HistoryWeights history_weights(const L1Coefficients& c, int n) {
  if (n < 2 || n > c.mesh().levels())
    throw ArgumentError("history_weights: level " + std::to_string(n) + " out of range");
  HistoryWeights h{c.diag(n), std::vector<double>(n - 1)};
  double prev = c(n, 1);
  h.weights[0] = prev;
  for (int j = 2; j <= n - 1; ++j) {
    const double cur = c(n, j);
    h.weights[j - 1] = cur - prev;
    prev = cur;
  }
  return h;
}

double caputo_power(double alpha, double exponent, double t) {
  if (!(exponent > 0.0)) throw ArgumentError("caputo_power: exponent must be positive");
  if (t < 0.0) throw ArgumentError("caputo_power: t must be nonnegative");
  const double scale = gamma(exponent + 1.0) / gamma(exponent + 1.0 - alpha);
  if (t == 0.0) {
    if (exponent > alpha) return 0.0;
    if (exponent == alpha) return scale;
    throw ArgumentError("caputo_power: unbounded at t = 0 for exponent < alpha");
  }
  return scale * std::pow(t, exponent - alpha);
}

double l1_apply(const L1Coefficients& c, std::span<const double> samples, int n) {
  if (n < 2 || n > c.mesh().levels()) throw ArgumentError("l1_apply: level out of range");
  if (static_cast<int>(samples.size()) < n)
    throw ArgumentError("l1_apply: need " + std::to_string(n) + " samples, got " +
                        std::to_string(samples.size()));
  double s = c.diag(n) * samples[n - 1];
  for (int j = 2; j <= n - 1; ++j) s += (c(n, j - 1) - c(n, j)) * samples[j - 1];
  s -= c(n, 1) * samples[0];
  return s;
}

ThetaMultipliers::ThetaMultipliers(const L1Coefficients& c) : levels_(c.mesh().levels()) {
  const auto& mesh = c.mesh();
  const double alpha = c.alpha();
  tau_pow_.resize(mesh.steps() + 1);
  for (int n = 1; n <= mesh.steps(); ++n) tau_pow_[n] = std::pow(mesh.step(n), alpha);
  // Level m enters through 1/T(m, m-1) = Gamma(2-a) tau_{m-1}^a; level 1 borrows tau_1.
  std::vector<double> inv_diag(levels_ + 1);
  inv_diag[1] = gamma(2.0 - alpha) * tau_pow_[1];
  for (int m = 2; m <= levels_; ++m) inv_diag[m] = 1.0 / c.diag(m);
  values_.assign(offset(levels_ + 1), 0.0);
  values_[offset(1)] = 1.0;
  for (int n = 2; n <= levels_; ++n) {
    values_[offset(n) + (n - 1)] = 1.0;
    for (int j = 1; j <= n - 1; ++j) {
      double s = 0.0;
      for (int k = 1; k <= n - j; ++k) {
        const int m = n - k;
        s += inv_diag[m] * values_[offset(m) + (j - 1)] * (c(n, m) - c(n, m - 1));
      }
      values_[offset(n) + (j - 1)] = s;
    }
  }
}

double ThetaMultipliers::stability_sum(int n) const {
  if (n < 2 || n > levels_) throw ArgumentError("stability_sum: level out of range");
  double s = 0.0;
  for (int j = 1; j <= n; ++j) s += (*this)(n, j);
  return tau_pow_[n - 1] * s;
}

ThetaMultipliers theta_multipliers(const L1Coefficients& c) { return ThetaMultipliers(c); }

}  // namespace tfdg
