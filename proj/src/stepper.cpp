#include "tfdg/stepper.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "tfdg/quadrature.hpp"

namespace tfdg {

namespace {

// Per-level coefficient data of the linear elliptic problem at t_n:
// the reaction part p(t_n) b(y) (the L1 diagonal is added by the march)
// and the source.
struct LevelCoefficients {
  SpaceFunction reaction;
  SpaceFunction source;
};
using LevelProvider = std::function<LevelCoefficients(int n, double t)>;

struct MarchInput {
  const SpaceFunction& a;
  const TimeFunction& p;
  const SpaceFunction& g;
  double alpha;
};

double l2_norm(const DGSpace& space, const Vector& coeffs) {
  return std::sqrt(std::max(coeffs.dot(apply_mass(space, coeffs)), 0.0));
}

double l2_norm(const DGSpace& space, const SpaceFunction& f) {
  const auto& rule = space.volume_rule();
  double s = 0.0;
  for (int e = 0; e < space.elements(); ++e)
    for (int q = 0; q < rule.npoints(); ++q) {
      const double v = f(space.mesh().map(e, rule.nodes[q]));
      s += rule.weights[q] * space.jacobian() * v * v;
    }
  return std::sqrt(s);
}

void check_compatibility(const SpaceFunction& g, double length) {
  const double g0 = g(0.0), g1 = g(length);
  if (std::abs(g0) > 1e-12 || std::abs(g1) > 1e-12) {
    std::ostringstream msg;
    msg << "initial data violates g(0) = g(ell) = 0: g(0) = " << g0 << ", g(ell) = " << g1;
    throw CoefficientError(msg.str());
  }
}

void check_time_coefficient(const TimeFunction& p, const GradedTimeMesh& mesh) {
  for (int n = 1; n <= mesh.levels(); ++n) {
    const double v = p(mesh.time(n));
    if (!(v > 0.0))
      throw CoefficientError("p(t) must be positive, got " + std::to_string(v) + " at t = " +
                             std::to_string(mesh.time(n)));
  }
}

template <class F, class Check>
void sample_space(const DGSpace& space, F&& f, Check&& check) {
  const auto& rule = space.volume_rule();
  for (int e = 0; e < space.elements(); ++e)
    for (int q = 0; q < rule.npoints(); ++q) {
      const double y = space.mesh().map(e, rule.nodes[q]);
      check(f(y), y);
    }
  for (double y : space.mesh().nodes()) check(f(y), y);
}

SolveResult march(const MarchInput& in, std::shared_ptr<const DGSpace> space, const GradedTimeMesh& mesh,
                  const LevelProvider& provider, const SolveOptions& options) {
  const L1Coefficients l1(mesh, in.alpha);
  SolveResult result;
  result.space = space;
  result.mesh = mesh;
  result.alpha = in.alpha;
  result.levels.reserve(mesh.levels());
  result.levels.push_back(project_initial(space, in.g));
  result.residuals.push_back(0.0);
  const double gamma_2ma = gamma(2.0 - in.alpha);
  if (options.stability_diagnostics) {
    result.level_norms.push_back(l2_norm(*space, result.levels[0].coeffs()));
    result.level_bounds.push_back(result.level_norms.back());
  }

  for (int n = 2; n <= mesh.levels(); ++n) {
    const double t = mesh.time(n);
    const double pn = in.p(t);
    const HistoryWeights hw = history_weights(l1, n);
    const LevelCoefficients level = provider(n, t);
    const SpaceFunction K = [&](double y) { return pn * in.a(y); };
    const SpaceFunction c = [&](double y) { return level.reaction(y) + hw.diag; };
    const BlockTridiagonalMatrix A = assemble_full(*space, K, c);

    Vector history = Vector::Zero(space->dimension());
    for (int j = 1; j <= n - 1; ++j) history += hw.weights[j - 1] * result.levels[j - 1].coeffs();
    const Vector rhs = source_vector(*space, level.source) + apply_mass(*space, history);
    Vector x = solve(A, rhs);

    const double bnorm = rhs.norm();
    const double res = (A.apply(x) - rhs).norm();
    result.residuals.push_back(bnorm > 0.0 ? res / bnorm : res);

    if (options.stability_diagnostics) {
      double hist = 0.0;
      for (int j = 1; j <= n - 1; ++j) hist += hw.weights[j - 1] * result.level_norms[j - 1];
      const double bound = std::pow(mesh.step(n - 1), in.alpha) * gamma_2ma * (l2_norm(*space, level.source) + hist);
      result.level_norms.push_back(l2_norm(*space, x));
      result.level_bounds.push_back(bound);
    }
    result.levels.emplace_back(space, std::move(x));
  }
  return result;
}

std::shared_ptr<const DGSpace> make_space(double length, const Discretization& disc) {
  SpatialMesh mesh = uniform_mesh(length, disc.M);
  const double sigma = disc.sigma_per_h ? disc.sigma / mesh.width() : disc.sigma;
  return std::make_shared<const DGSpace>(std::move(mesh), disc.k, sigma, disc.volume_points);
}

void check_discretization(const Discretization& disc) {
  if (disc.k < 1) throw ArgumentError("polynomial degree k must be >= 1");
  if (!(disc.sigma >= 0.0)) throw ArgumentError("penalty sigma must be nonnegative");
}

}  // namespace

void validate(const LinearProblemSpec& problem, const DGSpace& space, const GradedTimeMesh& mesh) {
  if (!problem.a || !problem.b || !problem.p || !problem.f || !problem.g)
    throw ArgumentError("problem '" + problem.name + "' is missing a coefficient function");
  sample_space(space, problem.a, [](double v, double y) {
    if (!(v > 0.0))
      throw CoefficientError("a(y) must be positive, got " + std::to_string(v) + " at y = " + std::to_string(y));
  });
  sample_space(space, problem.b, [](double v, double y) {
    if (!(v >= 0.0))
      throw CoefficientError("b(y) must be nonnegative, got " + std::to_string(v) + " at y = " + std::to_string(y));
  });
  check_time_coefficient(problem.p, mesh);
  check_compatibility(problem.g, problem.length);
}

SolveResult solve_linear(const LinearProblemSpec& problem, const Discretization& disc, const SolveOptions& options) {
  check_discretization(disc);
  const GradedTimeMesh mesh = graded_mesh(problem.final_time, disc.N, disc.r);
  auto space = make_space(problem.length, disc);
  validate(problem, *space, mesh);
  const LevelProvider provider = [&](int, double t) {
    const double pn = problem.p(t);
    return LevelCoefficients{[&problem, pn](double y) { return pn * problem.b(y); },
                             [&problem, t](double y) { return problem.f(y, t); }};
  };
  return march({problem.a, problem.p, problem.g, problem.alpha}, space, mesh, provider, options);
}

SolveResult solve_semilinear(const SemilinearProblemSpec& problem, const Discretization& disc,
                             const NewtonOptions& newton, const SolveOptions& options) {
  check_discretization(disc);
  if (!(newton.tol > 0.0)) throw ArgumentError("Newton tolerance must be positive");
  if (newton.max_outer < 1) throw ArgumentError("max_outer must be >= 1");
  if (!problem.a || !problem.b || !problem.b_u || !problem.p || !problem.f || !problem.g)
    throw ArgumentError("problem '" + problem.name + "' is missing a coefficient function");
  const GradedTimeMesh mesh = graded_mesh(problem.final_time, disc.N, disc.r);
  auto space = make_space(problem.length, disc);
  sample_space(*space, problem.a, [](double v, double y) {
    if (!(v > 0.0))
      throw CoefficientError("a(y) must be positive, got " + std::to_string(v) + " at y = " + std::to_string(y));
  });
  check_time_coefficient(problem.p, mesh);
  check_compatibility(problem.g, problem.length);

  std::vector<DGFunction> previous(mesh.levels(), DGFunction(space));
  std::vector<double> increments;
  for (int q = 0; q < newton.max_outer; ++q) {
    const LevelProvider provider = [&](int n, double t) {
      const double pn = problem.p(t);
      const DGFunction& uq = previous[n - 1];
      SpaceFunction reaction = [&problem, &uq, pn](double y) {
        const double u = uq.value(y);
        const double bu = problem.b_u(y, u);
        if (!(bu >= 0.0))
          throw CoefficientError("b_u(y, u) must be nonnegative, got " + std::to_string(bu) + " at y = " +
                                 std::to_string(y));
        return pn * bu;
      };
      SpaceFunction source = [&problem, &uq, pn, t](double y) {
        const double u = uq.value(y);
        return problem.f(y, t) - pn * (problem.b(y, u) - problem.b_u(y, u) * u);
      };
      return LevelCoefficients{std::move(reaction), std::move(source)};
    };
    SolveResult next = march({problem.a, problem.p, problem.g, problem.alpha}, space, mesh, provider, options);

    double change = 0.0;
    for (int n = 0; n < mesh.levels(); ++n)
      change = std::max(change, (next.levels[n].coeffs() - previous[n].coeffs()).cwiseAbs().maxCoeff());
    increments.push_back(change);
    previous = next.levels;
    if (change <= newton.tol) {
      next.newton_increments = std::move(increments);
      next.outer_iterations = q + 1;
      next.converged = true;
      return next;
    }
  }
  std::ostringstream msg;
  msg << "Newton iteration did not reach tol = " << newton.tol << " in " << newton.max_outer
      << " outer iterations; increments:";
  for (double d : increments) msg << ' ' << d;
  throw NewtonDivergence(msg.str(), std::move(increments));
}

}  // namespace tfdg
