#include "tfdg/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "tfdg/config.hpp"
#include "tfdg/errors.hpp"

namespace tfdg {

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::l2: return "l2";
    case NormKind::linf: return "linf";
    case NormKind::dg_energy: return "dg_energy";
    case NormKind::discrete_energy: return "discrete_energy";
  }
  throw InternalError("unknown norm kind");
}

std::string to_string(Reduction reduction) {
  return reduction == Reduction::final_time ? "final-time" : "max-over-levels";
}

NormKind parse_norm(const std::string& s) {
  const std::string v = trim(s);
  if (v == "l2") return NormKind::l2;
  if (v == "linf") return NormKind::linf;
  if (v == "dg_energy" || v == "dg") return NormKind::dg_energy;
  if (v == "discrete_energy" || v == "discrete") return NormKind::discrete_energy;
  throw ArgumentError("unknown norm '" + v + "' (expected l2, linf, dg_energy, discrete_energy)");
}

Reduction parse_reduction(const std::string& s) {
  const std::string v = trim(s);
  if (v == "final-time") return Reduction::final_time;
  if (v == "max-over-levels") return Reduction::max_over_levels;
  throw ArgumentError("unknown reduction '" + v + "' (expected final-time or max-over-levels)");
}

StepPolicy parse_step_policy(const std::string& s) {
  const std::string v = trim(s);
  StepPolicy policy;
  if (v == "coupled") {
    policy.kind = StepPolicy::Kind::coupled;
  } else if (v == "equal") {
    policy.kind = StepPolicy::Kind::equal;
  } else {
    policy.kind = StepPolicy::Kind::explicit_values;
    policy.values = parse_ints(v, "N");
    for (int n : policy.values)
      if (n < 1) throw ArgumentError("N must be >= 1");
  }
  return policy;
}

PenaltyPolicy parse_penalty_policy(const std::string& s) {
  std::string v = trim(s);
  PenaltyPolicy policy;
  if (v.size() > 2 && v.compare(v.size() - 2, 2, "/h") == 0) {
    policy.per_h = true;
    v = trim(v.substr(0, v.size() - 2));
  }
  policy.value = parse_real(v, "sigma");
  if (!(policy.value >= 0.0)) throw ArgumentError("sigma must be >= 0");
  return policy;
}

GradingPolicy parse_grading_policy(const std::string& s) {
  const std::string v = trim(s);
  GradingPolicy policy;
  if (v == "paper") return policy;
  policy.from_alpha = false;
  policy.value = parse_real(v, "r");
  if (!(policy.value >= 1.0)) throw ArgumentError("r must be >= 1");
  return policy;
}

int resolve_steps(const StepPolicy& policy, double alpha, int M, std::size_t index) {
  switch (policy.kind) {
    case StepPolicy::Kind::equal: return M;
    case StepPolicy::Kind::coupled: {
      // Guard against pow landing just below an integer.
      const double n = std::floor(std::pow(static_cast<double>(M), 2.0 / (2.0 - alpha)) + 1e-9);
      return std::max(1, static_cast<int>(n));
    }
    case StepPolicy::Kind::explicit_values:
      if (policy.values.size() == 1) return policy.values.front();
      if (index >= policy.values.size()) throw ArgumentError("N list shorter than M list");
      return policy.values[index];
  }
  throw InternalError("unknown step policy");
}

double resolve_grading(const GradingPolicy& policy, double alpha) {
  return policy.from_alpha ? (2.0 - alpha) / alpha : policy.value;
}

ExperimentConfig parse_experiment_config(const std::string& path) {
  const KeyValueFile file = KeyValueFile::read(path);
  file.require_known({"problem", "alpha", "M", "N", "k", "r", "sigma", "norms", "reduction", "output", "tol",
                      "max_outer", "jobs", "refine"});
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path candidate(p);
    return candidate.is_absolute() ? candidate.string() : (base / candidate).string();
  };

  ExperimentConfig c;
  c.problem = trim(file.get("problem"));
  const auto builtins = builtin_problem_ids();
  if (std::find(builtins.begin(), builtins.end(), c.problem) == builtins.end()) c.problem = resolve(c.problem);
  c.alphas = parse_reals(file.get("alpha"), "alpha");
  c.Ms = parse_ints(file.get("M"), "M");
  c.k = parse_int(file.get_or("k", "1"), "k");
  c.grading = parse_grading_policy(file.get_or("r", "paper"));
  c.steps = parse_step_policy(file.get_or("N", "coupled"));
  c.sigma = parse_penalty_policy(file.get_or("sigma", "1"));
  if (file.has("norms")) {
    c.norms.clear();
    for (const auto& n : split_list(file.get("norms"))) c.norms.push_back(parse_norm(n));
  }
  c.reduction = parse_reduction(file.get_or("reduction", "final-time"));
  c.output = resolve(trim(file.get_or("output", "results.csv")));
  c.newton.tol = parse_real(file.get_or("tol", "1e-7"), "tol");
  c.newton.max_outer = parse_int(file.get_or("max_outer", "25"), "max_outer");
  c.jobs = parse_int(file.get_or("jobs", "1"), "jobs");
  const std::string refine = trim(file.get_or("refine", "M"));
  if (refine == "M")
    c.refine = Refinement::space;
  else if (refine == "N")
    c.refine = Refinement::time;
  else
    throw ArgumentError("config: refine must be M or N, got '" + refine + "'");
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  if (c.problem.empty()) throw ArgumentError("config: problem is required");
  if (c.alphas.empty()) throw ArgumentError("config: alpha list is empty");
  if (c.Ms.empty()) throw ArgumentError("config: M list is empty");
  if (c.refine == Refinement::time && c.steps.kind != StepPolicy::Kind::explicit_values && c.Ms.size() > 1 &&
      std::adjacent_find(c.Ms.begin(), c.Ms.end(), std::not_equal_to<>()) == c.Ms.end())
    throw ArgumentError("config: refine = N with a repeated M needs an explicit N list");
  for (double a : c.alphas)
    if (!(a > 0.0 && a < 1.0)) throw ArgumentError("config: alpha must lie in (0, 1)");
  for (int M : c.Ms)
    if (M < 1) throw ArgumentError("config: M must be >= 1");
  if (c.steps.kind == StepPolicy::Kind::explicit_values && c.steps.values.size() != 1 &&
      c.steps.values.size() != c.Ms.size())
    throw ArgumentError("config: N list must have one entry or one per M");
  if (c.k < 1 || c.k > 10) throw ArgumentError("config: k must lie in [1, 10]");
  if (!(c.sigma.value >= 0.0)) throw ArgumentError("config: sigma must be >= 0");
  if (c.norms.empty()) throw ArgumentError("config: norms list is empty");
  if (!(c.newton.tol > 0.0) || c.newton.max_outer < 1) throw ArgumentError("config: bad Newton settings");
  if (c.jobs < 1) throw ArgumentError("config: jobs must be >= 1");
}

const ResultRow* ResultTable::find(double alpha, int M, NormKind norm) const {
  for (const auto& row : rows)
    if (std::abs(row.alpha - alpha) < 1e-12 && row.M == M && row.norm == norm) return &row;
  return nullptr;
}

NormReport level_norms(const SolveResult& result, const ExactSolution& exact, int n, double beta) {
  const double t = result.mesh.time(n);
  return error_norms(
      result.level(n), [&](double y) { return exact.value(y, t); }, [&](double y) { return exact.derivative(y, t); },
      beta);
}

namespace {

NormReport reduce(const SolveResult& result, const ExactSolution& exact, Reduction reduction, double beta) {
  const int last = result.level_count();
  if (reduction == Reduction::final_time) return level_norms(result, exact, last, beta);
  NormReport worst;
  worst.beta = beta;
  for (int n = 2; n <= last; ++n) {
    const NormReport r = level_norms(result, exact, n, beta);
    worst.l2 = std::max(worst.l2, r.l2);
    worst.linf = std::max(worst.linf, r.linf);
    worst.dg_energy = std::max(worst.dg_energy, r.dg_energy);
    worst.discrete_energy = std::max(worst.discrete_energy, r.discrete_energy);
  }
  return worst;
}

double pick(const NormReport& r, NormKind kind) {
  switch (kind) {
    case NormKind::l2: return r.l2;
    case NormKind::linf: return r.linf;
    case NormKind::dg_energy: return r.dg_energy;
    case NormKind::discrete_energy: return r.discrete_energy;
  }
  throw InternalError("unknown norm kind");
}

std::string cell_label(double alpha, int M, int N) {
  std::ostringstream s;
  s << "[alpha=" << alpha << ", M=" << M << ", N=" << N << "] ";
  return s.str();
}

// Re-throws the current exception with the cell prefixed, keeping its type.
[[noreturn]] void rethrow_annotated(const std::string& label) {
  try {
    throw;
  } catch (const NewtonDivergence& e) {
    throw NewtonDivergence(label + e.what(), e.increments());
  } catch (const ArgumentError& e) {
    throw ArgumentError(label + e.what());
  } catch (const CoefficientError& e) {
    throw CoefficientError(label + e.what());
  } catch (const SolverError& e) {
    throw SolverError(label + e.what());
  } catch (const IoError& e) {
    throw IoError(label + e.what());
  } catch (const std::exception& e) {
    throw InternalError(label + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace

CellResult run_cell(const RegisteredProblem& problem, double alpha, const Discretization& disc, Reduction reduction,
                    const NewtonOptions& newton) {
  const Problem instance = problem.make(alpha);
  const auto& exact = problem_exact(instance);
  if (!exact) throw ArgumentError("problem '" + problem.id + "' has no exact solution to measure against");

  CellResult cell;
  if (const auto* lin = std::get_if<LinearProblemSpec>(&instance)) {
    cell.solution = solve_linear(*lin, disc);
    const L1Coefficients l1(cell.solution.mesh, alpha);
    cell.beta = beta_weight(*lin, *cell.solution.space, l1);
  } else {
    const auto& semi = std::get<SemilinearProblemSpec>(instance);
    cell.solution = solve_semilinear(semi, disc, newton);
    const L1Coefficients l1(cell.solution.mesh, alpha);
    const SolveResult& sol = cell.solution;
    cell.beta = beta_weight(
        *sol.space, l1, semi.a, [&](double y, int n) { return semi.b_u(y, sol.level(n).value(y)); }, semi.p);
  }
  cell.norms = reduce(cell.solution, *exact, reduction, cell.beta.value);
  return cell;
}

ResultTable run_convergence(const ExperimentConfig& config) {
  validate(config);
  const RegisteredProblem problem = registry_lookup(config.problem);

  struct Cell {
    double alpha;
    int M;
    int N;
    double r;
    double sigma;
    NormReport norms;
  };
  std::vector<Cell> cells;
  for (double alpha : config.alphas)
    for (std::size_t i = 0; i < config.Ms.size(); ++i)
      cells.push_back({alpha, config.Ms[i], resolve_steps(config.steps, alpha, config.Ms[i], i),
                       resolve_grading(config.grading, alpha), 0.0, {}});

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      Cell& c = cells[i];
      try {
        try {
          Discretization disc;
          disc.M = c.M;
          disc.N = c.N;
          disc.k = config.k;
          disc.r = c.r;
          disc.sigma = config.sigma.value;
          disc.sigma_per_h = config.sigma.per_h;
          const CellResult result = run_cell(problem, c.alpha, disc, config.reduction, config.newton);
          c.sigma = result.solution.space->sigma(1);
          c.norms = result.norms;
        } catch (...) {
          rethrow_annotated(cell_label(c.alpha, c.M, c.N));
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(config.jobs, static_cast<int>(cells.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ResultTable table;
  table.problem = problem.id;
  table.timestamp = utc_timestamp();
  // Ordered reduction: alpha, norm, then M ascending.
  for (double alpha : config.alphas) {
    std::vector<const Cell*> chain;
    for (const auto& c : cells)
      if (c.alpha == alpha) chain.push_back(&c);
    const bool by_time = config.refine == Refinement::time;
    const auto resolution = [by_time](int M, int N) { return by_time ? N : M; };
    std::stable_sort(chain.begin(), chain.end(),
                     [&](const Cell* a, const Cell* b) { return resolution(a->M, a->N) < resolution(b->M, b->N); });
    for (NormKind norm : config.norms) {
      const std::size_t first = table.rows.size();
      for (const Cell* c : chain) {
        table.rows.push_back({problem.id, alpha, c->M, c->N, config.k, c->r, c->sigma, config.reduction, norm,
                              pick(c->norms, norm), std::nullopt});
      }
      for (std::size_t i = first; i < table.rows.size(); ++i)
        for (std::size_t j = first; j < table.rows.size(); ++j)
          if (resolution(table.rows[j].M, table.rows[j].N) == 2 * resolution(table.rows[i].M, table.rows[i].N) &&
              table.rows[i].error > 0.0 && table.rows[j].error > 0.0)
            table.rows[i].order = std::log2(table.rows[i].error / table.rows[j].error);
    }
  }
  return table;
}

std::string format_csv(const ResultTable& table) {
  std::ostringstream out;
  out << "problem,alpha,M,N,k,r,sigma,reduction,norm,error,order\n";
  for (const auto& row : table.rows) {
    out << row.problem << ',' << sci(row.alpha) << ',' << row.M << ',' << row.N << ',' << row.k << ','
        << sci(row.r) << ',' << sci(row.sigma) << ',' << to_string(row.reduction) << ',' << to_string(row.norm)
        << ',' << sci(row.error) << ',';
    if (row.order) out << sci(*row.order);
    out << '\n';
  }
  return out.str();
}

void write_csv(const ResultTable& table, const std::string& path) {
  auto out = open_output(path);
  out << format_csv(table);
  finish(out, path);
}

void write_metadata(const ResultTable& table, const std::string& path) {
  auto out = open_output(path);
  out << "version = " << table.version << "\n"
      << "timestamp = " << table.timestamp << "\n"
      << "problem = " << table.problem << "\n";
  finish(out, path);
}

std::vector<std::pair<int, double>> plot_grid(const DGSpace& space) {
  const int k = space.degree();
  std::vector<std::pair<int, double>> grid;
  grid.reserve(space.elements() * (k + 1) + 2);
  grid.emplace_back(0, -1.0);
  for (int e = 0; e < space.elements(); ++e)
    for (int s = 1; s <= k + 1; ++s) grid.emplace_back(e, -1.0 + 2.0 * s / (k + 2));
  grid.emplace_back(space.elements() - 1, 1.0);
  return grid;
}

void write_surface(const SolveResult& result, const std::string& path) {
  auto out = open_output(path);
  const auto grid = plot_grid(*result.space);
  for (int n = 1; n <= result.level_count(); ++n) {
    if (n > 1) out << '\n';
    const double t = result.mesh.time(n);
    const DGFunction& u = result.level(n);
    for (const auto& [e, z] : grid)
      out << sci(result.space->mesh().map(e, z)) << ' ' << sci(t) << ' ' << sci(u.value(e, z)) << '\n';
  }
  finish(out, path);
}

void write_error_curve(const SolveResult& result, const ExactSolution& exact, const std::string& path) {
  auto out = open_output(path);
  const auto grid = plot_grid(*result.space);
  const int last = result.level_count();
  const double t = result.mesh.time(last);
  const DGFunction& u = result.level(last);
  for (const auto& [e, z] : grid) {
    const double y = result.space->mesh().map(e, z);
    out << sci(y) << ' ' << sci(exact.value(y, t) - u.value(e, z)) << '\n';
  }
  finish(out, path);
}

}  // namespace tfdg
