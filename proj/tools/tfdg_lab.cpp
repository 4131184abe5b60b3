// tfdg_lab: solve, converge and selftest front end.
#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>

#include "tfdg/errors.hpp"
#include "tfdg/lab.hpp"
#include "tfdg/selftest.hpp"

namespace {

using namespace tfdg;

struct SolveArgs {
  std::string problem;
  double alpha = 0.5;
  int M = 20;
  std::string N = "coupled";
  int k = 1;
  std::string r = "paper";
  std::string sigma = "1";
  std::string reduction = "final-time";
  std::string out = ".";
};

int run_solve(const SolveArgs& args) {
  if (!(args.alpha > 0.0 && args.alpha < 1.0)) throw ArgumentError("--alpha must lie in (0, 1)");
  if (args.M < 1) throw ArgumentError("--M must be >= 1");
  const RegisteredProblem problem = registry_lookup(args.problem);
  Discretization disc;
  disc.M = args.M;
  disc.N = resolve_steps(parse_step_policy(args.N), args.alpha, args.M, 0);
  disc.k = args.k;
  disc.r = resolve_grading(parse_grading_policy(args.r), args.alpha);
  const PenaltyPolicy penalty = parse_penalty_policy(args.sigma);
  disc.sigma = penalty.value;
  disc.sigma_per_h = penalty.per_h;
  const Reduction reduction = parse_reduction(args.reduction);

  const CellResult cell = run_cell(problem, args.alpha, disc, reduction);
  if (!cell.beta.warning.empty()) std::cerr << "warning: " << cell.beta.warning << "\n";

  ResultTable table;
  table.problem = problem.id;
  for (NormKind norm : {NormKind::l2, NormKind::linf, NormKind::dg_energy, NormKind::discrete_energy}) {
    const double e = norm == NormKind::l2     ? cell.norms.l2
                     : norm == NormKind::linf ? cell.norms.linf
                     : norm == NormKind::dg_energy ? cell.norms.dg_energy
                                                   : cell.norms.discrete_energy;
    table.rows.push_back({problem.id, args.alpha, disc.M, disc.N, disc.k, disc.r, cell.solution.space->sigma(1), reduction, norm, e,
                          std::nullopt});
  }
  const std::filesystem::path dir(args.out);
  write_csv(table, (dir / "results.csv").string());
  write_surface(cell.solution, (dir / "surface.dat").string());
  const Problem instance = problem.make(args.alpha);
  write_error_curve(cell.solution, *problem_exact(instance), (dir / "error_curve.dat").string());

  std::cout << format_csv(table);
  if (cell.solution.outer_iterations > 0)
    std::cout << "# newton outer iterations: " << cell.solution.outer_iterations << "\n";
  return 0;
}

int run_converge(const std::string& config_path) {
  const ExperimentConfig config = parse_experiment_config(config_path);
  const ResultTable table = run_convergence(config);
  write_csv(table, config.output);
  write_metadata(table, config.output + ".meta");
  std::cout << format_csv(table);
  return 0;
}

int run_selftest_command() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  for (const auto& r : run_selftest()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    ok = ok && r.passed;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "selftest " << (ok ? "passed" : "failed") << " in " << secs << " s\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-fractional DG laboratory"};
  app.set_version_flag("--version", tfdg::kVersion);
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one problem instance and write results and plot data");
  solve_cmd->add_option("--problem", solve.problem, "Built-in id or family problem file")->required();
  solve_cmd->add_option("--alpha", solve.alpha, "Fractional order in (0,1)")->required();
  solve_cmd->add_option("--M", solve.M, "Number of elements")->required();
  solve_cmd->add_option("--N", solve.N, "Time steps: integer, 'coupled' or 'equal'");
  solve_cmd->add_option("--k", solve.k, "Polynomial degree");
  solve_cmd->add_option("--r", solve.r, "Grading exponent or 'paper' for (2-alpha)/alpha");
  solve_cmd->add_option("--sigma", solve.sigma, "Penalty: value or value/h");
  solve_cmd->add_option("--reduction", solve.reduction, "final-time or max-over-levels");
  solve_cmd->add_option("--out", solve.out, "Output directory");

  std::string config;
  auto* converge_cmd = app.add_subcommand("converge", "Run a convergence study from a config file");
  converge_cmd->add_option("--config", config, "Config file")->required();

  auto* self_cmd = app.add_subcommand("selftest", "Run the property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve_cmd) return run_solve(solve);
    if (*converge_cmd) return run_converge(config);
    if (*self_cmd) return run_selftest_command();
  } catch (const tfdg::ArgumentError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const tfdg::CoefficientError& e) {
    std::cerr << "coefficient error: " << e.what() << "\n";
    return 3;
  } catch (const tfdg::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 4;
  } catch (const tfdg::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
