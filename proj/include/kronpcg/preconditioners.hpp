#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kronpcg/poisson_operator.hpp"
#include "kronpcg/tensor.hpp"

namespace kronpcg {

/// Sink for non-fatal events raised while applying a preconditioner.
using WarningSink = std::vector<std::string>;

/// Linear map Z = M(R) applied once per PCG iteration.
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;

  [[nodiscard]] virtual DenseTensor apply(const DenseTensor& r, OpCounter* counter = nullptr,
                                          WarningSink* warnings = nullptr) const = 0;
  [[nodiscard]] virtual std::string describe() const = 0;
};

// ---------------------------------------------------------------------------
// Jacobi-like sweeps

/// Weighted-Jacobi splitting of every factor, L = omega*D + O_omega, plus the
/// entrywise inverse of the diagonal-sum tensor (scaled by omega).
struct JacobiState {
  int sweeps = 1;
  double omega = 1.0;
  std::vector<TriStencil> off_parts;  ///< O_omega(L_l) per direction.
  DenseTensor inv_diag;               ///< Hadamard inverse of D-hat_omega.

  [[nodiscard]] DenseMatrix off_part_dense(std::size_t mode) const { return off_parts.at(mode).dense(); }
};

JacobiState jacobi_init(const PoissonOperator& op, int sweeps, double omega);

/// `sweeps` stationary steps on op*X = R from X_0 = 0.
DenseTensor jacobi_apply(const JacobiState& st, const DenseTensor& r, OpCounter* counter = nullptr);

struct StationaryRun {
  DenseTensor solution;
  std::vector<double> residuals;  ///< True residual norm after each step (index 0 = initial guess).
  std::vector<std::uint64_t> ops_cum;  ///< Cumulative sweep work per step; residual monitoring is not counted.
  bool diverged = false;          ///< Residual exceeded 1e12 times the initial one.
  /// First step whose residual is <= stop_below, if a target was given and reached.
  std::optional<std::size_t> reached_at;
};

/// Stand-alone weighted Jacobi solver. Stops after `max_iters` steps, on
/// divergence, or once the true residual drops to `stop_below` (if given).
StationaryRun jacobi_standalone(const PoissonOperator& op, const DenseTensor& h, double omega, std::size_t max_iters,
                                const DenseTensor& x0, std::optional<double> stop_below = std::nullopt);

// ---------------------------------------------------------------------------
// Moore-Penrose pseudoinverse

struct PinvState {
  std::vector<DenseMatrix> bases;             ///< Eigenbasis V_l of every factor.
  std::vector<DenseMatrix> bases_transposed;  ///< V_l^T.
  DenseTensor g_hat;                          ///< Hadamard pseudoinverse of the eigenvalue sums.
};

PinvState pinv_init(const PoissonOperator& op, SpectrumSource source = SpectrumSource::Numeric,
                    double tol = kPinvThreshold);

/// (V_n, V_q[, V_t] | G-hat .* (V_n^T, V_q^T[, V_t^T] | R)).
DenseTensor pinv_apply(const PinvState& st, const DenseTensor& r, OpCounter* counter = nullptr);

// ---------------------------------------------------------------------------
// Low-Kronecker-rank approximate inverse (2D only)

struct LowRankState {
  std::size_t rank = 0;
  std::vector<DenseMatrix> m_n;  ///< V_n diag(x_rho) V_n^T.
  std::vector<DenseMatrix> m_q;  ///< V_q diag(sigma_rho y_rho) V_q^T.
  std::vector<double> singular_values;  ///< All singular values of G-hat, descending.
  DenseMatrix left;                     ///< Leading `rank` left singular vectors (n x rank).
  DenseMatrix right;                    ///< Leading `rank` right singular vectors (q x rank).
  DenseTensor g_hat;
};

/// Truncated SVD of G-hat. Throws Unsupported for 3D operators.
LowRankState lowrank_init(const PoissonOperator& op, std::size_t rank,
                          SpectrumSource source = SpectrumSource::Numeric);

/// sum_rho M_{n,rho} R M_{q,rho}^T. Emits a warning when <Z, R> <= 0.
DenseTensor lowrank_apply(const LowRankState& st, const DenseTensor& r, OpCounter* counter = nullptr,
                          WarningSink* warnings = nullptr);

/// Frobenius norm of G-hat minus its rank-`rank` truncation.
double lowrank_truncation_error(const LowRankState& st);

// ---------------------------------------------------------------------------
// Configuration and factory

enum class PreconditionerKind { Identity, Jacobi, LowRank, Pinv };

struct PreconditionerConfig {
  PreconditionerKind kind = PreconditionerKind::Pinv;
  int sweeps = 3;
  double omega = 1.3;
  std::size_t rank = 3;
  SpectrumSource source = SpectrumSource::Numeric;
};

/// Grammar: "none" | "pinv" | "jacobi:p=3,omega=1.3" | "lowrank:r=3".
/// "pinv" and "lowrank" also accept "spectrum=analytic".
PreconditionerConfig parse_preconditioner(const std::string& text);
std::string to_string(const PreconditionerConfig& cfg);

std::unique_ptr<Preconditioner> make_preconditioner(const PoissonOperator& op, const PreconditionerConfig& cfg);

class IdentityPreconditioner final : public Preconditioner {
 public:
  DenseTensor apply(const DenseTensor& r, OpCounter* counter, WarningSink* warnings) const override;
  std::string describe() const override { return "none"; }
};

class JacobiPreconditioner final : public Preconditioner {
 public:
  JacobiPreconditioner(const PoissonOperator& op, int sweeps, double omega);
  DenseTensor apply(const DenseTensor& r, OpCounter* counter, WarningSink* warnings) const override;
  std::string describe() const override;
  [[nodiscard]] const JacobiState& state() const noexcept { return state_; }

 private:
  JacobiState state_;
};

class PinvPreconditioner final : public Preconditioner {
 public:
  explicit PinvPreconditioner(const PoissonOperator& op, SpectrumSource source = SpectrumSource::Numeric);
  DenseTensor apply(const DenseTensor& r, OpCounter* counter, WarningSink* warnings) const override;
  std::string describe() const override { return "pinv"; }
  [[nodiscard]] const PinvState& state() const noexcept { return state_; }

 private:
  PinvState state_;
};

class LowRankPreconditioner final : public Preconditioner {
 public:
  LowRankPreconditioner(const PoissonOperator& op, std::size_t rank,
                        SpectrumSource source = SpectrumSource::Numeric);
  DenseTensor apply(const DenseTensor& r, OpCounter* counter, WarningSink* warnings) const override;
  std::string describe() const override;
  [[nodiscard]] const LowRankState& state() const noexcept { return state_; }

 private:
  LowRankState state_;
};

}  // namespace kronpcg
