#pragma once

#include <span>
#include <utility>
#include <vector>

namespace tfdg {

/// Gamma function for x > 0 (Lanczos approximation, g = 7, nine terms).
/// Throws ArgumentError for x <= 0.
double gamma(double x);

/// Legendre polynomial P_n and its derivative at x, by the three-term
/// recurrence.
struct LegendreValue {
  double value;
  double derivative;
};
LegendreValue legendre(int n, double x);

enum class RuleKind { gauss, lobatto };

/// Quadrature rule on the reference interval [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // positive, sum to 2
  RuleKind kind = RuleKind::gauss;

  int npoints() const { return static_cast<int>(nodes.size()); }

  /// Integral of f over the reference interval.
  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) s += weights[q] * f(nodes[q]);
    return s;
  }
};

/// n-point Gauss-Legendre rule, 1 <= n <= 32.
QuadratureRule gauss_rule(int n);

/// n-point Gauss-Lobatto rule, 2 <= n <= 33. The interior nodes are the
/// roots of P'_{n-1}.
QuadratureRule lobatto_rule(int n);

/// Nodal Lagrange basis of degree k on the k+1 Lobatto points of [-1, 1],
/// evaluated in barycentric form.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> barycentric_weights() const { return bary_; }

  /// Values and first derivatives of all k+1 basis polynomials at z.
  /// values/derivs must have size() entries.
  void eval(double z, std::span<double> values, std::span<double> derivs) const;

  struct Evaluation {
    std::vector<double> values;
    std::vector<double> derivatives;
  };
  Evaluation eval(double z) const;

 private:
  int degree_;
  std::vector<double> nodes_;
  std::vector<double> bary_;
  // Differentiation matrix, diff_[j * size() + i] = l_i'(x_j).
  std::vector<double> diff_;
};

}  // namespace tfdg
