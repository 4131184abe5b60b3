#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tfdg/stepper.hpp"

namespace tfdg {

using Problem = std::variant<LinearProblemSpec, SemilinearProblemSpec>;

/// Polynomial with ascending coefficients.
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double x) const;
  Polynomial derivative() const;
};

/// sum_i c_i t^{e_i}, where each exponent is e_i = base + alpha_multiple * alpha.
struct PowerSeries {
  struct Term {
    double coeff;
    double base;
    double alpha_multiple;
    double exponent(double alpha) const { return base + alpha_multiple * alpha; }
  };
  std::vector<Term> terms;

  double value(double alpha, double t) const;
  /// Caputo derivative of order alpha; constant terms contribute 0.
  double caputo(double alpha, double t) const;
};

enum class Trig { none, sin, cos };

/// psi(y) = P(y) * trig(freq * y) with its first two derivatives.
struct SeparableProfile {
  Polynomial poly;
  Trig trig = Trig::none;
  double freq = 1.0;

  double value(double y) const;
  double d1(double y) const;
  double d2(double y) const;
};

/// Exact solution u(y, t) = phi(t) psi(y), used to build manufactured
/// problems from coefficient families and to check hand-derived sources.
struct ManufacturedSolution {
  PowerSeries time;
  SeparableProfile space;
  SpaceFunction a_derivative;
};

/// Linear problem defined by polynomial coefficients a(y), b(y), p(t) and a
/// separable exact solution; f and g are derived from it.
struct FamilySpec {
  std::string name;
  double length = 1.0;
  double final_time = 1.0;
  PowerSeries time;
  SeparableProfile space;
  Polynomial a{{1.0}};
  Polynomial b{{1.0}};
  Polynomial p{{1.0}};
};

LinearProblemSpec make_family_problem(const FamilySpec& spec, double alpha);

/// Reads a family problem from a key = value file (keys: name, length,
/// final_time, time_terms, space_poly, space_trig, space_freq, a_poly,
/// b_poly, p_poly). Throws IoError / ArgumentError.
FamilySpec parse_family_file(const std::string& path);

struct RegisteredProblem {
  std::string id;
  bool semilinear = false;
  std::function<Problem(double alpha)> make;
  std::optional<ManufacturedSolution> manufactured;
};

/// Built-in ids: example1-constant, example2-variable, example3-semilinear.
/// Anything else is read as a family problem file.
RegisteredProblem registry_lookup(const std::string& id);
std::vector<std::string> builtin_problem_ids();

/// max over an ny x nt grid of (0, ell] x (0, T] of |D^a u + L u - f|, with
/// D^a u from caputo_power and L u from the analytic profile derivatives.
double manufactured_residual(const Problem& problem, const ManufacturedSolution& exact, int ny = 200, int nt = 50);

const std::string& problem_name(const Problem& problem);
double problem_alpha(const Problem& problem);
const std::optional<ExactSolution>& problem_exact(const Problem& problem);

}  // namespace tfdg
