#include "tfdg/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "tfdg/dg.hpp"
#include "tfdg/fractional.hpp"
#include "tfdg/norms.hpp"
#include "tfdg/problems.hpp"
#include "tfdg/quadrature.hpp"
#include "tfdg/stepper.hpp"

namespace tfdg {

namespace {

SuiteResult make(const std::string& name, bool ok, const std::string& what, double worst, double limit) {
  std::ostringstream s;
  s.precision(3);
  s << what << " " << std::scientific << worst << " (limit " << limit << ")";
  return {name, ok, s.str()};
}

// Exact integral of z^p over [-1, 1].
double monomial_integral(int p) { return p % 2 == 1 ? 0.0 : 2.0 / (p + 1); }

DGFunction random_function(std::shared_ptr<const DGSpace> space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DGFunction v(space);
  for (int i = 0; i < space->dimension(); ++i) v.coeffs()[i] = u(rng);
  return v;
}

}  // namespace

SuiteResult check_quadrature_exactness() {
  double worst = 0.0;
  for (int n = 1; n <= 20; ++n) {
    const auto g = gauss_rule(n);
    for (int p = 0; p <= 2 * n - 1; ++p)
      worst = std::max(worst, std::abs(g.integrate([p](double z) { return std::pow(z, p); }) - monomial_integral(p)));
  }
  for (int n = 2; n <= 20; ++n) {
    const auto l = lobatto_rule(n);
    for (int p = 0; p <= 2 * n - 3; ++p)
      worst = std::max(worst, std::abs(l.integrate([p](double z) { return std::pow(z, p); }) - monomial_integral(p)));
  }
  return make("quadrature exactness", worst <= 1e-12, "max monomial error", worst, 1e-12);
}

SuiteResult check_gamma_recurrence() {
  double worst = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double x = 0.05 * i;
    const double lhs = gamma(x + 1.0);
    worst = std::max(worst, std::abs(lhs - x * gamma(x)) / std::abs(lhs));
  }
  return make("gamma recurrence", worst <= 1e-12, "max relative defect", worst, 1e-12);
}

SuiteResult check_l1_structure() {
  std::mt19937_64 rng(20261014);
  std::uniform_int_distribution<int> steps(2, 200);
  std::uniform_real_distribution<double> alpha(0.05, 0.95), grading(1.0, 6.0);
  double telescoping = 0.0;
  bool monotone = true;
  for (int trial = 0; trial < 40; ++trial) {
    const L1Coefficients c(GradedTimeMesh(1.0, steps(rng), grading(rng)), alpha(rng));
    for (int n = 2; n <= c.mesh().levels(); ++n) {
      const auto h = history_weights(c, n);
      double sum = 0.0;
      for (double w : h.weights) sum += w;
      telescoping = std::max(telescoping, std::abs(h.diag - sum) / h.diag);
      for (int j = 2; j <= n - 1; ++j)
        if (c(n, j) < c(n, j - 1)) monotone = false;
    }
  }
  SuiteResult r = make("L1 monotonicity and telescoping", telescoping <= 1e-12 && monotone,
                       "max telescoping defect", telescoping, 1e-12);
  if (!monotone) r.detail += "; monotonicity violated";
  return r;
}

SuiteResult check_theta_bound() {
  double worst = 0.0;
  bool positive = true;
  for (double a : {0.2, 0.4, 0.6, 0.8})
    for (double r : {1.0, (2.0 - a) / a})
      for (int N : {16, 32, 64, 128}) {
        const double T = 1.0;
        const L1Coefficients c(GradedTimeMesh(T, N, r), a);
        const ThetaMultipliers theta(c);
        for (int n = 2; n <= N + 1; ++n) {
          for (int j = 1; j <= n; ++j)
            if (!(theta(n, j) > 0.0)) positive = false;
          worst = std::max(worst, theta.stability_sum(n) / std::pow(T, a));
        }
      }
  SuiteResult res = make("theta positivity and bound", positive && worst <= kThetaBoundConstant,
                         "max tau^a sum theta / T^a", worst, kThetaBoundConstant);
  if (!positive) res.detail += "; non-positive multiplier";
  return res;
}

SuiteResult check_coercivity(int samples) {
  std::mt19937_64 rng(7);
  double worst = 0.0;  // max of (|||v|||^2 - B(v,v)) / |||v|||^2
  double cancel = 0.0;
  for (const auto& id : builtin_problem_ids()) {
    const RegisteredProblem reg = registry_lookup(id);
    const Problem prob = reg.make(0.5);
    const double ell = std::visit([](const auto& p) { return p.length; }, prob);
    const GradedTimeMesh mesh(1.0, 16, 2.0);
    const L1Coefficients l1(mesh, 0.5);
    for (int k = 1; k <= 3; ++k) {
      auto space = std::make_shared<const DGSpace>(SpatialMesh(ell, 6), k, 1.0);
      for (int n : {2, 9, 17}) {
        const double t = mesh.time(n);
        SpaceFunction K, c;
        LevelReaction bn;
        TimeFunction p;
        SpaceFunction a;
        if (const auto* lin = std::get_if<LinearProblemSpec>(&prob)) {
          p = lin->p;
          a = lin->a;
          K = [lin, pn = lin->p(t)](double y) { return pn * lin->a(y); };
          c = [lin, pn = lin->p(t), d = l1.diag(n)](double y) { return pn * lin->b(y) + d; };
          bn = [lin](double y, int) { return lin->b(y); };
        } else {
          const auto* s = &std::get<SemilinearProblemSpec>(prob);
          p = s->p;
          a = s->a;
          K = [s, pn = s->p(t)](double y) { return pn * s->a(y); };
          c = [s, t, pn = s->p(t), d = l1.diag(n)](double y) { return pn * s->b_u(y, s->exact->value(y, t)) + d; };
          bn = [s, &mesh](double y, int m) { return s->b_u(y, s->exact->value(y, mesh.time(m))); };
        }
        const auto B = assemble_full(*space, K, c);
        const auto B13 = [&] {
          auto m = assemble_B1(*space, K, c);
          m += assemble_B3(*space);
          return m;
        }();
        const double beta = beta_weight(*space, l1, a, bn, p).value;
        for (int s = 0; s < samples / 9 + 1; ++s) {
          const DGFunction v = random_function(space, rng);
          const double bvv = B.form(v.coeffs(), v.coeffs());
          const double dg = std::pow(function_norms(v, beta).dg_energy, 2);
          worst = std::max(worst, (dg - bvv) / dg);
          const double b13 = B13.form(v.coeffs(), v.coeffs());
          cancel = std::max(cancel, std::abs(bvv - b13) / std::abs(b13));
        }
      }
    }
  }
  SuiteResult r = make("coercivity", worst <= 1e-10 && cancel <= 1e-12, "max relative deficit", worst, 1e-10);
  std::ostringstream s;
  s.precision(3);
  s << "; flux cancellation " << std::scientific << cancel;
  r.detail += s.str();
  return r;
}

SuiteResult check_norm_coincidence(int samples) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> deg(1, 4), elems(1, 12);
  std::uniform_real_distribution<double> len(0.5, 4.0), beta(0.1, 3.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    auto space = std::make_shared<const DGSpace>(SpatialMesh(len(rng), elems(rng)), deg(rng), 1.0);
    const DGFunction v = random_function(space, rng);
    const NormReport r = function_norms(v, beta(rng));
    worst = std::max(worst, std::abs(r.dg_energy - r.discrete_energy) / r.dg_energy);
  }
  return make("norm coincidence", worst <= 1e-10, "max relative gap", worst, 1e-10);
}

SuiteResult check_zero_data_uniqueness() {
  double worst = 0.0;
  for (const auto& id : {"example1-constant", "example2-variable"}) {
    auto prob = std::get<LinearProblemSpec>(registry_lookup(id).make(0.5));
    prob.f = [](double, double) { return 0.0; };
    prob.g = [](double) { return 0.0; };
    for (int k : {1, 2}) {
      Discretization d;
      d.M = 8;
      d.N = 12;
      d.k = k;
      d.r = 1.5;
      const SolveResult res = solve_linear(prob, d);
      for (const auto& level : res.levels) worst = std::max(worst, function_norms(level, 1.0).l2);
    }
  }
  return make("zero-data uniqueness", worst <= 1e-12, "max level norm", worst, 1e-12);
}

SuiteResult check_manufactured_residual() {
  double worst = 0.0;
  for (const auto& id : builtin_problem_ids()) {
    const RegisteredProblem reg = registry_lookup(id);
    for (double a : {0.3, 0.5, 0.8}) worst = std::max(worst, manufactured_residual(reg.make(a), *reg.manufactured));
  }
  return make("manufactured residual", worst <= 1e-9, "max residual", worst, 1e-9);
}

std::vector<SuiteResult> run_selftest() {
  return {check_quadrature_exactness(), check_gamma_recurrence(),     check_l1_structure(),
          check_theta_bound(),          check_coercivity(),           check_norm_coincidence(),
          check_zero_data_uniqueness(), check_manufactured_residual()};
}

}  // namespace tfdg
