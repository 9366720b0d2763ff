#include "kronpcg/experiment.hpp"

namespace kronpcg {

std::vector<ExperimentRun> run_experiment(const Problem& problem, const std::vector<PreconditionerConfig>& configs,
                                          const SolverConfig& cfg) {
  const PoissonOperator op = problem.spec.make_operator();
  const DenseTensor u0(problem.spec.shape);
  std::vector<ExperimentRun> runs;
  runs.reserve(configs.size());
  for (const auto& c : configs) {
    const auto m = make_preconditioner(op, c);
    SolveResult res = pcg(op, problem.h, *m, u0, cfg);
    runs.push_back({to_string(c), std::move(res.log), std::move(res.solution)});
  }
  return runs;
}

std::optional<std::size_t> iterations_to(const ConvergenceLog& log, double rel_tol) {
  for (const auto& rec : log.records) {
    if (rec.true_residual <= rel_tol * log.rhs_norm) return rec.s;
  }
  return std::nullopt;
}

std::optional<std::size_t> iterations_to(const std::vector<double>& residuals, double rhs_norm, double rel_tol) {
  for (std::size_t s = 0; s < residuals.size(); ++s) {
    if (residuals[s] <= rel_tol * rhs_norm) return s;
  }
  return std::nullopt;
}

}  // namespace kronpcg
