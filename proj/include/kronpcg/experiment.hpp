#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kronpcg/pcg.hpp"
#include "kronpcg/preconditioners.hpp"
#include "kronpcg/problems.hpp"

namespace kronpcg {

struct ExperimentRun {
  std::string preconditioner;
  ConvergenceLog log;
  DenseTensor solution;
};

/// One PCG solve per configuration, each from U_0 = 0.
std::vector<ExperimentRun> run_experiment(const Problem& problem, const std::vector<PreconditionerConfig>& configs,
                                          const SolverConfig& cfg);

/// First logged iteration whose true residual is <= rel_tol * ||H||.
std::optional<std::size_t> iterations_to(const ConvergenceLog& log, double rel_tol);

/// Same for a stand-alone stationary run (residuals[0] is the initial one).
std::optional<std::size_t> iterations_to(const std::vector<double>& residuals, double rhs_norm, double rel_tol);

}  // namespace kronpcg
