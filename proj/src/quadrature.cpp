#include "tfdg/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "tfdg/errors.hpp"

namespace tfdg {

namespace {

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr int kMaxNewton = 100;

// Newton iteration for a root of f in (-1, 1), step halved whenever it
// would leave the interval.
template <class F>
double newton_root(F&& f, double x, const char* what, int n) {
  for (int it = 0; it < kMaxNewton; ++it) {
    auto [value, slope] = f(x);
    double dx = value / slope;
    double next = x - dx;
    while (std::abs(next) >= 1.0) {
      dx *= 0.5;
      next = x - dx;
    }
    x = next;
    if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) {
      // One extra step polishes the last ulp.
      auto [v2, s2] = f(x);
      return x - v2 / s2;
    }
  }
  throw InternalError(std::string(what) + ": Newton failed to converge for n = " +
                      std::to_string(n));
}

// Mirror the computed upper half so the rule is exactly symmetric.
void symmetrize(QuadratureRule& rule) {
  const std::size_t n = rule.nodes.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[j] + rule.weights[i]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
}

}  // namespace

double gamma(double x) {
  if (!(x > 0.0)) throw ArgumentError("gamma: argument must be positive, got " + std::to_string(x));
  if (x < 0.5) {
    // Reflection keeps the series in its accurate range.
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
  }
  const double z = x - 1.0;
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (z + static_cast<double>(i));
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * sum;
}

LegendreValue legendre(int n, double x) {
  if (n < 0) throw ArgumentError("legendre: negative degree");
  if (n == 0) return {1.0, 0.0};
  double p0 = 1.0, p1 = x;
  double d0 = 0.0, d1 = 1.0;
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    // P'_j = P'_{j-2} + (2j - 1) P_{j-1}
    const double d2 = d0 + (2.0 * j - 1.0) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  return {p1, d1};
}

QuadratureRule gauss_rule(int n) {
  if (n < 1 || n > 32) throw ArgumentError("gauss_rule: n must be in [1, 32], got " + std::to_string(n));
  QuadratureRule rule;
  rule.kind = RuleKind::gauss;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-type initial guess, descending in i.
    const double guess = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    const double x = newton_root(
        [n](double z) {
          auto [p, dp] = legendre(n, z);
          return std::pair{p, dp};
        },
        guess, "gauss_rule", n);
    const double dp = legendre(n, x).derivative;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  symmetrize(rule);
  return rule;
}

QuadratureRule lobatto_rule(int n) {
  if (n < 2 || n > 33) throw ArgumentError("lobatto_rule: n must be in [2, 33], got " + std::to_string(n));
  QuadratureRule rule;
  rule.kind = RuleKind::lobatto;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int deg = n - 1;
  const double nn1 = deg * (deg + 1.0);
  rule.nodes.front() = -1.0;
  rule.nodes.back() = 1.0;
  rule.weights.front() = rule.weights.back() = 2.0 / nn1;
  for (int i = 1; i < deg; ++i) {
    // Chebyshev-Gauss-Lobatto guesses interlace the roots of P'_deg.
    const double guess = -std::cos(std::numbers::pi * i / deg);
    const double x = newton_root(
        [deg, nn1](double z) {
          auto [p, dp] = legendre(deg, z);
          const double d2p = (2.0 * z * dp - nn1 * p) / (1.0 - z * z);
          return std::pair{dp, d2p};
        },
        guess, "lobatto_rule", n);
    const double p = legendre(deg, x).value;
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / (nn1 * p * p);
  }
  symmetrize(rule);
  return rule;
}

LagrangeBasis::LagrangeBasis(int degree) : degree_(degree) {
  if (degree < 1) throw ArgumentError("LagrangeBasis: degree must be >= 1");
  nodes_ = lobatto_rule(degree + 1).nodes;
  const int n = size();
  bary_.assign(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) bary_[i] /= (nodes_[i] - nodes_[j]);
  diff_.assign(n * n, 0.0);
  for (int j = 0; j < n; ++j) {
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const double d = (bary_[i] / bary_[j]) / (nodes_[j] - nodes_[i]);
      diff_[j * n + i] = d;
      diag -= d;
    }
    diff_[j * n + j] = diag;
  }
}

void LagrangeBasis::eval(double z, std::span<double> values, std::span<double> derivs) const {
  const int n = size();
  for (int j = 0; j < n; ++j) {
    if (std::abs(z - nodes_[j]) < 1e-14) {
      for (int i = 0; i < n; ++i) {
        values[i] = (i == j) ? 1.0 : 0.0;
        derivs[i] = diff_[j * n + i];
      }
      return;
    }
  }
  double denom = 0.0;
  for (int i = 0; i < n; ++i) {
    values[i] = bary_[i] / (z - nodes_[i]);
    denom += values[i];
  }
  for (int i = 0; i < n; ++i) values[i] /= denom;
  // l_i'(z) = l_i(z) * sum_{j != i} 1 / (z - x_j)
  double total = 0.0;
  for (int j = 0; j < n; ++j) total += 1.0 / (z - nodes_[j]);
  for (int i = 0; i < n; ++i) derivs[i] = values[i] * (total - 1.0 / (z - nodes_[i]));
}

LagrangeBasis::Evaluation LagrangeBasis::eval(double z) const {
  Evaluation e{std::vector<double>(size()), std::vector<double>(size())};
  eval(z, e.values, e.derivatives);
  return e;
}

}  // namespace tfdg
