#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tfdg/dg.hpp"
#include "tfdg/errors.hpp"
#include "tfdg/fractional.hpp"
#include "tfdg/mesh.hpp"

namespace tfdg {

using TimeFunction = std::function<double(double)>;
using SpaceTimeFunction = std::function<double(double y, double t)>;
using StateFunction = std::function<double(double y, double u)>;

/// Exact solution with its spatial derivative, for error measurement.
struct ExactSolution {
  SpaceTimeFunction value;
  SpaceTimeFunction derivative;
};

/// D^a u + p(t) [-(a u_y)_y + b u] = f on (0, ell) x (0, T],
/// u(., 0) = g, homogeneous Dirichlet data.
struct LinearProblemSpec {
  std::string name;
  double alpha = 0.5;
  double length = 1.0;
  double final_time = 1.0;
  SpaceFunction a;
  SpaceFunction b;
  TimeFunction p;
  SpaceTimeFunction f;
  SpaceFunction g;
  std::optional<ExactSolution> exact;
};

/// As LinearProblemSpec with a reaction term b(y, u), b_u >= 0.
struct SemilinearProblemSpec {
  std::string name;
  double alpha = 0.5;
  double length = 1.0;
  double final_time = 1.0;
  SpaceFunction a;
  StateFunction b;
  StateFunction b_u;
  TimeFunction p;
  SpaceTimeFunction f;
  SpaceFunction g;
  std::optional<ExactSolution> exact;
};

struct Discretization {
  int M = 20;
  int N = 20;
  int k = 1;
  double r = 1.0;
  double sigma = 1.0;
  bool sigma_per_h = false;  // penalty sigma / h instead of sigma
  int volume_points = 0;     // 0 selects k+3
};

struct SolveOptions {
  bool stability_diagnostics = false;
};

struct NewtonOptions {
  double tol = 1e-7;
  int max_outer = 25;
};

struct SolveResult {
  std::shared_ptr<const DGSpace> space;
  GradedTimeMesh mesh{1.0, 1, 1.0};
  double alpha = 0.5;
  std::vector<DGFunction> levels;  // levels[n-1] holds u_h^n

  /// Relative residual ||A x - b|| / ||b|| of each level solve (0 at level 1).
  std::vector<double> residuals;
  /// Filled with SolveOptions::stability_diagnostics: ||u_h^n|| and the
  /// one-level bound tau_{n-1}^a Gamma(2-a) (||F^n|| + sum_j w_j ||u_h^j||).
  std::vector<double> level_norms;
  std::vector<double> level_bounds;

  /// Semilinear solves: max nodal change after each outer iterate.
  std::vector<double> newton_increments;
  int outer_iterations = 0;
  bool converged = true;

  int level_count() const { return static_cast<int>(levels.size()); }
  const DGFunction& level(int n) const { return levels.at(n - 1); }
};

/// Carries the increment history of a Newton loop that hit max_outer.
class NewtonDivergence : public SolverError {
 public:
  NewtonDivergence(const std::string& what, std::vector<double> increments)
      : SolverError(what), increments_(std::move(increments)) {}
  const std::vector<double>& increments() const { return increments_; }

 private:
  std::vector<double> increments_;
};

/// Checks a > 0, b >= 0 at the quadrature points, p > 0 at every time
/// level and g(0) = g(ell) = 0. Throws CoefficientError.
void validate(const LinearProblemSpec& problem, const DGSpace& space, const GradedTimeMesh& mesh);

SolveResult solve_linear(const LinearProblemSpec& problem, const Discretization& disc,
                         const SolveOptions& options = {});

/// Newton linearization applied to the whole space-time problem: every
/// outer iterate is a full solve_linear-style march with reaction
/// p b_u(y, u^(q)) and source f - p [b(y, u^(q)) - b_u(y, u^(q)) u^(q)],
/// starting from u^(0) = 0.
SolveResult solve_semilinear(const SemilinearProblemSpec& problem, const Discretization& disc,
                             const NewtonOptions& newton = {}, const SolveOptions& options = {});

}  // namespace tfdg
