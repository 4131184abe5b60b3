#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tfdg/norms.hpp"
#include "tfdg/problems.hpp"
#include "tfdg/stepper.hpp"

namespace tfdg {

inline constexpr const char* kVersion = "1.0.0";

enum class NormKind { l2, linf, dg_energy, discrete_energy };
enum class Reduction { final_time, max_over_levels };
/// Direction along which orders are computed: M doubling or N doubling.
enum class Refinement { space, time };

std::string to_string(NormKind kind);
std::string to_string(Reduction reduction);
NormKind parse_norm(const std::string& s);
Reduction parse_reduction(const std::string& s);

/// N = explicit value(s) | floor(M^{2/(2-a)}) | M.
struct StepPolicy {
  enum class Kind { explicit_values, coupled, equal } kind = Kind::coupled;
  std::vector<int> values;  // one per M, or a single value for all
};
/// r = explicit value | (2-a)/a.
struct GradingPolicy {
  bool from_alpha = true;  // r = (2-a)/a
  double value = 1.0;
};

/// sigma = value | value/h.
struct PenaltyPolicy {
  double value = 1.0;
  bool per_h = false;
};

StepPolicy parse_step_policy(const std::string& s);
PenaltyPolicy parse_penalty_policy(const std::string& s);
GradingPolicy parse_grading_policy(const std::string& s);
int resolve_steps(const StepPolicy& policy, double alpha, int M, std::size_t index);
double resolve_grading(const GradingPolicy& policy, double alpha);

struct ExperimentConfig {
  std::string problem;
  std::vector<double> alphas;
  std::vector<int> Ms;
  int k = 1;
  GradingPolicy grading;
  StepPolicy steps;
  PenaltyPolicy sigma;
  std::vector<NormKind> norms{NormKind::l2, NormKind::linf, NormKind::dg_energy, NormKind::discrete_energy};
  Reduction reduction = Reduction::final_time;
  std::string output = "results.csv";
  NewtonOptions newton;
  int jobs = 1;
  Refinement refine = Refinement::space;
};

/// Reads a converge config (keys: problem, alpha, M, N, k, r, sigma, norms,
/// reduction, output, tol, max_outer, jobs, refine). Relative problem/output paths
/// resolve against the config file's directory.
ExperimentConfig parse_experiment_config(const std::string& path);
void validate(const ExperimentConfig& config);

struct ResultRow {
  std::string problem;
  double alpha;
  int M;
  int N;
  int k;
  double r;
  double sigma;  // penalty actually applied
  Reduction reduction;
  NormKind norm;
  double error;
  std::optional<double> order;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::string problem;
  std::string version = kVersion;
  std::string timestamp;

  /// Row lookup; nullptr when absent.
  const ResultRow* find(double alpha, int M, NormKind norm) const;
};

/// Solves one problem instance and reduces its error norms.
struct CellResult {
  SolveResult solution;
  NormReport norms;
  BetaWeight beta;
};
CellResult run_cell(const RegisteredProblem& problem, double alpha, const Discretization& disc,
                    Reduction reduction, const NewtonOptions& newton = {});

/// Error norms of a solution at one level.
NormReport level_norms(const SolveResult& result, const ExactSolution& exact, int n, double beta);

/// For every (alpha, M): resolve N and r, solve, measure, then attach
/// log2 ratios along the doubling chain of the refined resolution (M by
/// default, N with refine = N). Rows are ordered by alpha, norm, resolution.
ResultTable run_convergence(const ExperimentConfig& config);

/// Results CSV: problem,alpha,M,N,k,r,sigma,reduction,norm,error,order.
std::string format_csv(const ResultTable& table);
void write_csv(const ResultTable& table, const std::string& path);
/// Sidecar with version, timestamp and problem id.
void write_metadata(const ResultTable& table, const std::string& path);
/// Rows (y, t, u_h) per level, blank line between levels.
void write_surface(const SolveResult& result, const std::string& path);
/// Rows (y, u(y,T) - u_h(y,T)).
void write_error_curve(const SolveResult& result, const ExactSolution& exact, const std::string& path);
/// Spatial sampling grid of the plot files: the two boundary points plus
/// k+1 interior points per element, strictly increasing.
std::vector<std::pair<int, double>> plot_grid(const DGSpace& space);

}  // namespace tfdg
