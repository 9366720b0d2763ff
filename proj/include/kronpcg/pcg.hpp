#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kronpcg/poisson_operator.hpp"
#include "kronpcg/preconditioners.hpp"
#include "kronpcg/tensor.hpp"

namespace kronpcg {

enum class CenterMode { Auto, On, Off };

/// How the operator is applied inside the solver.
enum class ApplyVariant {
  Sparse,  ///< Three stored entries per row.
  Full,    ///< Dense mode products with the full 1D matrices.
};

struct SolverConfig {
  std::size_t max_iter = 10;
  /// Auto centers Z after every preconditioner application iff the operator is singular.
  CenterMode center = CenterMode::Auto;
  /// Stop once ||H - A U_s|| <= stop_tol * ||H||.
  std::optional<double> stop_tol;
  /// Compute true residual and kappa for every iterate.
  bool record_true_residual = true;
  ApplyVariant variant = ApplyVariant::Sparse;
};

struct IterationRecord {
  std::size_t s = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  double computed_residual = 0.0;  ///< ||R_s|| of the recursively updated residual.
  double true_residual = 0.0;      ///< ||H - A U_s||, NaN when not recorded.
  double kappa = 0.0;              ///< <U_s, A U_s> - 2 <U_s, H>, NaN when not recorded.
  double null_norm = 0.0;          ///< nullspace_component(U_s).
  double solution_norm = 0.0;      ///< ||U_s||.
  std::uint64_t ops_cum = 0;       ///< Cumulative work counted so far (see OpTally::work).
};

/// Operation counts split by purpose.
struct OpTally {
  OpCounter solver;          ///< Operator applications, inner products and saxpys of the PCG recurrence.
  OpCounter preconditioner;  ///< Preconditioner applications.
  OpCounter centering;       ///< 3 ops per entry per centering.
  OpCounter stopping;        ///< True-residual evaluations made for the stopping test.
  OpCounter diagnostics;     ///< Logging only; excluded from work().

  [[nodiscard]] std::uint64_t work() const noexcept {
    return solver.ops + preconditioner.ops + centering.ops + stopping.ops;
  }
};

enum class SolveStatus {
  MaxIterations,  ///< Ran the requested number of iterations.
  Converged,      ///< Met stop_tol, or the residual reached rounding level.
  Breakdown,      ///< rho_s <= 0 or <W_s, P_{s-1}> <= 0; the log is partial.
};

std::string to_string(SolveStatus status);

struct EtaSeries {
  std::vector<double> eta;     ///< sqrt(kappa_s - min kappa).
  std::vector<double> scaled;  ///< alpha * eta_s + beta.
  double alpha = 1.0;
  double beta = 0.0;
  bool alpha_fallback = false;  ///< eta_1 was at or below machine epsilon, alpha set to 1.
};

/// Machine epsilon of binary64, 2^-52.
inline constexpr double kMachineEpsilon = 2.220446049250313e-16;

/// Post-processes the kappa sequence. `first_true_residual` is the true
/// residual of iterate 1 (of iterate 0 if the list has one entry).
EtaSeries eta_series(std::span<const double> kappas, double first_true_residual);

struct ConvergenceLog {
  std::vector<IterationRecord> records;
  EtaSeries eta;
  std::vector<std::string> warnings;
  SolveStatus status = SolveStatus::MaxIterations;
  std::string breakdown_reason;
  bool centered = false;
  double rhs_norm = 0.0;
  OpTally ops;
};

struct SolveResult {
  DenseTensor solution;
  ConvergenceLog log;
};

/// Preconditioned conjugate gradients on A U = H. For singular operators H
/// must be orthogonal to the constant vector.
SolveResult pcg(const PoissonOperator& op, const DenseTensor& h, const Preconditioner& m, const DenseTensor& u0,
                const SolverConfig& cfg);

double true_residual(const PoissonOperator& op, const DenseTensor& h, const DenseTensor& u);

/// Energy-error proxy: kappa(U) = ||U - U*||_A^2 - ||U*||_A^2.
double kappa(const PoissonOperator& op, const DenseTensor& h, const DenseTensor& u);

}  // namespace kronpcg
