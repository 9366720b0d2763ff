#include "kronpcg/pcg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "kronpcg/error.hpp"

namespace kronpcg {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Tolerance on <H, 1>/sqrt(N) relative to ||H|| for singular operators.
constexpr double kCenteredTolerance = 1e-10;
// Relative size of the recursively updated residual below which a
// non-positive rho counts as convergence (about 1e4 machine epsilons).
constexpr double kRoundingResidual = 1e4 * 2.220446049250313e-16;

DenseTensor apply_op(const PoissonOperator& op, const DenseTensor& x, ApplyVariant variant, OpCounter* counter) {
  return variant == ApplyVariant::Sparse ? op.apply(x, counter) : op.apply_full(x, counter);
}

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::MaxIterations: return "max-iterations";
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Breakdown: return "breakdown";
  }
  return "unknown";
}

double true_residual(const PoissonOperator& op, const DenseTensor& h, const DenseTensor& u) {
  return frobenius_norm(saxpy(-1.0, op.apply(u), h));
}

double kappa(const PoissonOperator& op, const DenseTensor& h, const DenseTensor& u) {
  return inner(u, op.apply(u)) - 2.0 * inner(u, h);
}

EtaSeries eta_series(std::span<const double> kappas, double first_true_residual) {
  EtaSeries out;
  out.beta = kMachineEpsilon;
  if (kappas.empty()) return out;
  const double kmin = *std::min_element(kappas.begin(), kappas.end());
  out.eta.reserve(kappas.size());
  for (double k : kappas) out.eta.push_back(std::sqrt(std::max(0.0, k - kmin)));

  const double eta1 = out.eta.size() > 1 ? out.eta[1] : out.eta[0];
  if (eta1 <= kMachineEpsilon || !std::isfinite(first_true_residual)) {
    out.alpha = 1.0;
    out.alpha_fallback = true;
  } else {
    out.alpha = first_true_residual / eta1;
  }
  out.scaled.reserve(out.eta.size());
  for (double e : out.eta) out.scaled.push_back(out.alpha * e + out.beta);
  return out;
}

SolveResult pcg(const PoissonOperator& op, const DenseTensor& h, const Preconditioner& m, const DenseTensor& u0,
                const SolverConfig& cfg) {
  if (!(h.shape() == op.shape())) {
    fail(ErrorCode::ShapeMismatch, "right-hand side " + h.shape().str() + " does not match operator " +
                                       op.shape().str());
  }
  require_same_shape(h, u0, "initial guess");

  const bool singular = op.is_singular();
  const double h_norm = frobenius_norm(h);
  if (singular && nullspace_component(h) > kCenteredTolerance * std::max(h_norm, 1.0)) {
    fail(ErrorCode::InvalidArgument,
         "operator is singular and the right-hand side has a nonzero mean; center it first");
  }

  SolveResult result;
  ConvergenceLog& log = result.log;
  OpTally& ops = log.ops;
  log.rhs_norm = h_norm;
  log.centered = cfg.center == CenterMode::On || (cfg.center == CenterMode::Auto && singular);

  std::vector<double> kappas;
  auto record = [&](std::size_t s, double alpha, double beta, double rho, const DenseTensor& u, const DenseTensor& r,
                    double stop_res) {
    IterationRecord rec;
    rec.s = s;
    rec.alpha = alpha;
    rec.beta = beta;
    rec.rho = rho;
    rec.computed_residual = frobenius_norm(r);
    rec.true_residual = kNaN;
    rec.kappa = kNaN;
    if (cfg.record_true_residual) {
      const DenseTensor au = apply_op(op, u, cfg.variant, &ops.diagnostics);
      rec.true_residual = std::isnan(stop_res) ? frobenius_norm(saxpy(-1.0, au, h, &ops.diagnostics)) : stop_res;
      rec.kappa = inner(u, au, &ops.diagnostics) - 2.0 * inner(u, h, &ops.diagnostics);
      kappas.push_back(rec.kappa);
    }
    rec.null_norm = nullspace_component(u);
    rec.solution_norm = frobenius_norm(u);
    rec.ops_cum = ops.work();
    log.records.push_back(rec);
  };

  // Stopping test on the true residual; its cost is counted as work.
  auto stop_residual = [&](const DenseTensor& u) {
    if (!cfg.stop_tol) return kNaN;
    const DenseTensor au = apply_op(op, u, cfg.variant, &ops.stopping);
    const DenseTensor diff = saxpy(-1.0, au, h, &ops.stopping);
    return std::sqrt(inner(diff, diff, &ops.stopping));
  };
  auto precondition = [&](const DenseTensor& r, std::size_t s) {
    WarningSink raised;
    DenseTensor z = m.apply(r, &ops.preconditioner, &raised);
    for (auto& w : raised) log.warnings.push_back("iteration " + std::to_string(s) + ": " + w);
    if (log.centered) center_inplace(z, &ops.centering);
    return z;
  };

  DenseTensor u = u0;
  const DenseTensor w0 = apply_op(op, u, cfg.variant, &ops.solver);
  DenseTensor r = saxpy(-1.0, w0, h, &ops.solver);
  DenseTensor z = precondition(r, 0);
  DenseTensor p = z;
  double rho = inner(r, z, &ops.solver);

  double res = stop_residual(u);
  record(0, 0.0, 0.0, rho, u, r, res);

  auto finish = [&] {
    if (cfg.record_true_residual && !log.records.empty()) {
      const double r1 = log.records.size() > 1 ? log.records[1].true_residual : log.records[0].true_residual;
      log.eta = eta_series(kappas, r1);
    }
    result.solution = std::move(u);
    return std::move(result);
  };
  auto met_tolerance = [&](double value) { return cfg.stop_tol && value <= *cfg.stop_tol * h_norm; };
  // A non-positive rho on a residual this small is rounding noise, not an
  // indefinite preconditioner: the iteration has nothing left to reduce.
  auto at_rounding_level = [&](const DenseTensor& r_s, std::size_t s) {
    const double rn = frobenius_norm(r_s);
    if (rn > kRoundingResidual * h_norm) return false;
    if (rn > 0.0) {
      log.warnings.push_back("iteration " + std::to_string(s) + ": residual " + sci(rn) +
                             " is at rounding level, stopping");
    }
    return true;
  };

  if (h_norm == 0.0 && frobenius_norm(r) == 0.0) {
    log.status = SolveStatus::Converged;
    return finish();
  }
  if (met_tolerance(res)) {
    log.status = SolveStatus::Converged;
    return finish();
  }
  if (!(rho > 0.0)) {
    if (at_rounding_level(r, 0)) {
      log.status = SolveStatus::Converged;
    } else {
      log.status = SolveStatus::Breakdown;
      log.breakdown_reason = "rho_0 = " + sci(rho) + " is not positive";
    }
    return finish();
  }

  for (std::size_t s = 1; s <= cfg.max_iter; ++s) {
    const DenseTensor w = apply_op(op, p, cfg.variant, &ops.solver);
    const double pw = inner(p, w, &ops.solver);
    if (!(pw > 0.0)) {
      if (at_rounding_level(r, s)) {
        log.status = SolveStatus::Converged;
      } else {
        log.status = SolveStatus::Breakdown;
        log.breakdown_reason = "<W, P> = " + sci(pw) + " is not positive at iteration " + std::to_string(s);
      }
      return finish();
    }
    const double alpha = rho / pw;
    axpy_inplace(alpha, p, u, &ops.solver);
    axpy_inplace(-alpha, w, r, &ops.solver);
    z = precondition(r, s);
    const double rho_new = inner(r, z, &ops.solver);
    const double beta = rho_new / rho;
    // P_s = Z_s + beta P_{s-1}
    p = saxpy(beta, p, z, &ops.solver);
    rho = rho_new;

    res = stop_residual(u);
    record(s, alpha, beta, rho, u, r, res);

    // Below machine precision the recursion only amplifies rounding noise.
    if (met_tolerance(res) || log.records.back().computed_residual <= kMachineEpsilon * h_norm) {
      log.status = SolveStatus::Converged;
      return finish();
    }
    if (!(rho > 0.0)) {
      if (at_rounding_level(r, s)) {
        log.status = SolveStatus::Converged;
      } else {
        log.status = SolveStatus::Breakdown;
        log.breakdown_reason = "rho = " + sci(rho) + " is not positive at iteration " + std::to_string(s);
      }
      return finish();
    }
  }
  log.status = SolveStatus::MaxIterations;
  return finish();
}

}  // namespace kronpcg
