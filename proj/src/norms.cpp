#include "tfdg/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tfdg/errors.hpp"

namespace tfdg {

namespace {

template <class F>
double min_over_space(const DGSpace& space, F&& f) {
  double lo = std::numeric_limits<double>::infinity();
  const auto& rule = space.volume_rule();
  for (int e = 0; e < space.elements(); ++e)
    for (int q = 0; q < rule.npoints(); ++q) lo = std::min(lo, f(space.mesh().map(e, rule.nodes[q])));
  for (double y : space.mesh().nodes()) lo = std::min(lo, f(y));
  return lo;
}

// Basis values and physical derivatives on a fixed set of reference points.
struct BasisTable {
  std::vector<double> points;
  std::vector<double> values;
  std::vector<double> derivatives;
  int n;

  BasisTable(const DGSpace& space, std::vector<double> pts) : points(std::move(pts)), n(space.local_size()) {
    values.resize(points.size() * n);
    derivatives.resize(points.size() * n);
    for (std::size_t q = 0; q < points.size(); ++q) {
      space.basis().eval(points[q], std::span<double>(values).subspan(q * n, n),
                         std::span<double>(derivatives).subspan(q * n, n));
      for (int i = 0; i < n; ++i) derivatives[q * n + i] /= space.jacobian();
    }
  }

  double value(const DGFunction& f, int e, std::size_t q) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += values[q * n + i] * f.coeff(e, i);
    return s;
  }
  double derivative(const DGFunction& f, int e, std::size_t q) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += derivatives[q * n + i] * f.coeff(e, i);
    return s;
  }
};

}  // namespace

BetaWeight beta_weight(const DGSpace& space, const L1Coefficients& l1, const SpaceFunction& a,
                       const LevelReaction& b, const TimeFunction& p) {
  const auto& mesh = l1.mesh();
  double p_min = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= mesh.steps(); ++n) p_min = std::min(p_min, p(mesh.time(n)));
  const double a_min = min_over_space(space, a);
  double b_min = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= mesh.levels(); ++n)
    b_min = std::min(b_min, min_over_space(space, [&](double y) { return b(y, n); }));

  BetaWeight result;
  result.value = std::min(p_min * a_min, b_min * p_min);
  if (result.value > 0.0) return result;

  double c_min = std::numeric_limits<double>::infinity();
  for (int n = 2; n <= mesh.levels(); ++n) {
    const double pn = p(mesh.time(n));
    c_min = std::min(c_min, min_over_space(space, [&](double y) { return pn * b(y, n); }) + l1.diag(n));
  }
  result.value = std::min(p_min * a_min, c_min);
  result.fallback = true;
  std::ostringstream msg;
  msg << "norm weight min{p*a*, p*b*} vanishes; using min{p*a*, min_n c^n*} = " << result.value;
  result.warning = msg.str();
  return result;
}

BetaWeight beta_weight(const LinearProblemSpec& problem, const DGSpace& space, const L1Coefficients& l1) {
  return beta_weight(space, l1, problem.a, [&](double y, int) { return problem.b(y); }, problem.p);
}

NormReport error_norms(const DGFunction& uh, const SpaceFunction& exact, const SpaceFunction& exact_derivative,
                       double beta) {
  if (!exact || !exact_derivative) throw ArgumentError("error_norms: exact value and derivative are required");
  const DGSpace& space = uh.space();
  const SpatialMesh& mesh = space.mesh();
  const int k = space.degree();
  const double jac = space.jacobian();

  const QuadratureRule fine = gauss_rule(k + 5);
  const BasisTable fine_tab(space, fine.nodes);
  const QuadratureRule& gk = space.gauss_k_rule();
  const BasisTable gauss_tab(space, gk.nodes);
  const int samples = 10 * (k + 1) + 1;
  std::vector<double> sample_pts(samples);
  for (int s = 0; s < samples; ++s) sample_pts[s] = -1.0 + 2.0 * s / (samples - 1);
  const BasisTable sample_tab(space, sample_pts);

  double l2sq = 0.0, gradsq = 0.0, gauss_gradsq = 0.0, linf = 0.0;
  for (int e = 0; e < space.elements(); ++e) {
    for (std::size_t q = 0; q < fine.nodes.size(); ++q) {
      const double y = mesh.map(e, fine.nodes[q]);
      const double ev = exact(y) - fine_tab.value(uh, e, q);
      const double ed = exact_derivative(y) - fine_tab.derivative(uh, e, q);
      const double w = fine.weights[q] * jac;
      l2sq += w * ev * ev;
      gradsq += w * ed * ed;
    }
    for (std::size_t q = 0; q < gk.nodes.size(); ++q) {
      const double y = mesh.map(e, gk.nodes[q]);
      const double ed = exact_derivative(y) - gauss_tab.derivative(uh, e, q);
      gauss_gradsq += gk.weights[q] * jac * ed * ed;
    }
    for (std::size_t q = 0; q < sample_pts.size(); ++q) {
      const double y = mesh.map(e, sample_pts[q]);
      linf = std::max(linf, std::abs(exact(y) - sample_tab.value(uh, e, q)));
    }
  }

  double jumpsq = 0.0;
  const int last = space.elements() + 1;
  for (int m = 1; m <= last; ++m) {
    const double u = exact(mesh.node(m));
    double jump;
    if (m == 1)
      jump = u - uh.trace_plus(1);
    else if (m == last)
      jump = -(u - uh.trace_minus(last));
    else
      jump = (u - uh.trace_plus(m)) - (u - uh.trace_minus(m));
    jumpsq += space.sigma(m) * jump * jump;
  }

  NormReport r;
  r.beta = beta;
  r.l2 = std::sqrt(l2sq);
  r.linf = linf;
  r.dg_energy = std::sqrt(beta * (gradsq + l2sq) + jumpsq);
  r.discrete_energy = std::sqrt(beta * gauss_gradsq + beta * l2sq + jumpsq);
  return r;
}

NormReport function_norms(const DGFunction& v, double beta) {
  const auto zero = [](double) { return 0.0; };
  return error_norms(v, zero, zero, beta);
}

DGFunction lobatto_interpolant(std::shared_ptr<const DGSpace> space, const SpaceFunction& u) {
  DGFunction f(space);
  const auto nodes = space->basis().nodes();
  for (int e = 0; e < space->elements(); ++e)
    for (int i = 0; i < space->local_size(); ++i) f.coeff(e, i) = u(space->mesh().map(e, nodes[i]));
  return f;
}

std::vector<double> convergence_order(std::span<const std::pair<double, double>> errors) {
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const auto [r0, e0] = errors[i];
    const auto [r1, e1] = errors[i + 1];
    if (std::abs(r1 - 2.0 * r0) > 1e-12 * std::abs(r1))
      throw ArgumentError("convergence_order: resolutions must double");
    if (!(e0 > 0.0) || !(e1 > 0.0)) throw ArgumentError("convergence_order: errors must be positive");
    orders.push_back(std::log2(e0 / e1));
  }
  return orders;
}

}  // namespace tfdg
