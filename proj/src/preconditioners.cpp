#include "kronpcg/preconditioners.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kronpcg/error.hpp"

namespace kronpcg {

// ---------------------------------------------------------------------------
// Jacobi-like sweeps

JacobiState jacobi_init(const PoissonOperator& op, int sweeps, double omega) {
  if (sweeps < 1) fail(ErrorCode::InvalidArgument, "jacobi: sweep count p must be >= 1");
  if (!(omega >= 1.0)) fail(ErrorCode::InvalidArgument, "jacobi: omega must lie in [1, inf)");

  JacobiState st;
  st.sweeps = sweeps;
  st.omega = omega;
  for (const auto& f : op.factors()) {
    TriStencil off = f.stencil();
    for (auto& row : off.rows) row.val[1] *= (1.0 - omega);
    st.off_parts.push_back(std::move(off));
  }

  const Shape& s = op.shape();
  st.inv_diag = DenseTensor(s);
  for (std::size_t k = 0; k < s[2]; ++k)
    for (std::size_t j = 0; j < s[1]; ++j)
      for (std::size_t i = 0; i < s[0]; ++i) {
        double d = op.factor(0).diagonal(i) + op.factor(1).diagonal(j);
        if (op.ndim() == 3) d += op.factor(2).diagonal(k);
        st.inv_diag(i, j, k) = 1.0 / (omega * d);
      }
  return st;
}

namespace {

// F = R - sum_l O_l x_l X, counted as stencil work plus one subtraction per entry.
DenseTensor jacobi_rhs(const JacobiState& st, const DenseTensor& r, const DenseTensor& x, OpCounter* counter) {
  DenseTensor ox(x.shape());
  for (std::size_t m = 0; m < st.off_parts.size(); ++m) accumulate_mode_stencil(st.off_parts[m], m, x, ox, counter);
  DenseTensor f = r;
  auto fs = f.data();
  const auto os = ox.data();
  for (std::size_t i = 0; i < fs.size(); ++i) fs[i] -= os[i];
  count(counter, f.size());
  return f;
}

}  // namespace

DenseTensor jacobi_apply(const JacobiState& st, const DenseTensor& r, OpCounter* counter) {
  require_same_shape(st.inv_diag, r, "jacobi_apply");
  // X_0 = 0, so the first sweep reduces to a diagonal scaling.
  DenseTensor x = hadamard(st.inv_diag, r, counter);
  for (int j = 1; j < st.sweeps; ++j) x = hadamard(st.inv_diag, jacobi_rhs(st, r, x, counter), counter);
  return x;
}

StationaryRun jacobi_standalone(const PoissonOperator& op, const DenseTensor& h, double omega, std::size_t max_iters,
                                const DenseTensor& x0, std::optional<double> stop_below) {
  const JacobiState st = jacobi_init(op, 1, omega);
  require_same_shape(h, x0, "jacobi_standalone");

  StationaryRun run;
  run.solution = x0;
  auto residual = [&](const DenseTensor& x) { return frobenius_norm(saxpy(-1.0, op.apply(x), h)); };
  const double r0 = residual(x0);
  run.residuals.push_back(r0);
  run.ops_cum.push_back(0);
  OpCounter work;
  if (stop_below && r0 <= *stop_below) {
    run.reached_at = 0;
    return run;
  }
  for (std::size_t it = 1; it <= max_iters; ++it) {
    run.solution = hadamard(st.inv_diag, jacobi_rhs(st, h, run.solution, &work), &work);
    const double r = residual(run.solution);
    run.residuals.push_back(r);
    run.ops_cum.push_back(work.ops);
    if (!std::isfinite(r) || r > 1e12 * r0) {
      run.diverged = true;
      break;
    }
    if (stop_below && r <= *stop_below) {
      run.reached_at = it;
      break;
    }
  }
  return run;
}

// ---------------------------------------------------------------------------
// Pseudoinverse

PinvState pinv_init(const PoissonOperator& op, SpectrumSource source, double tol) {
  const auto spectra = factor_spectra(op, source);
  PinvState st;
  for (const auto& s : spectra) {
    st.bases.push_back(s.vectors);
    st.bases_transposed.push_back(s.vectors.transposed());
  }
  st.g_hat = hadamard_pinv(spectrum_sums(spectra), tol);
  return st;
}

namespace {

std::optional<DenseMatrix> third(const std::vector<DenseMatrix>& m) {
  return m.size() == 3 ? std::optional<DenseMatrix>(m[2]) : std::nullopt;
}

}  // namespace

DenseTensor pinv_apply(const PinvState& st, const DenseTensor& r, OpCounter* counter) {
  require_same_shape(st.g_hat, r, "pinv_apply");
  const auto& vt = st.bases_transposed;
  const auto& v = st.bases;
  DenseTensor f1 = linear_transform(vt[0], vt[1], third(vt), r, counter);
  DenseTensor f2 = hadamard(f1, st.g_hat, counter);
  return linear_transform(v[0], v[1], third(v), f2, counter);
}

// ---------------------------------------------------------------------------
// Low Kronecker rank

namespace {

// V diag(d) V^T
DenseMatrix spectral_product(const DenseMatrix& v, const std::vector<double>& d) {
  DenseMatrix scaled = v;
  for (std::size_t j = 0; j < v.cols(); ++j)
    for (std::size_t i = 0; i < v.rows(); ++i) scaled(i, j) *= d[j];
  return matmul(scaled, v.transposed());
}

}  // namespace

LowRankState lowrank_init(const PoissonOperator& op, std::size_t rank, SpectrumSource source) {
  if (op.ndim() != 2) fail(ErrorCode::Unsupported, "low-rank preconditioner is 2D-only");
  const std::size_t n = op.shape()[0];
  const std::size_t q = op.shape()[1];
  if (rank < 1 || rank > std::min(n, q)) {
    fail(ErrorCode::InvalidArgument,
         "low-rank preconditioner: rank must be in [1, " + std::to_string(std::min(n, q)) + "]");
  }
  const PinvState pinv = pinv_init(op, source);

  const Eigen::Map<const Eigen::MatrixXd> g(pinv.g_hat.data().data(), Eigen::Index(n), Eigen::Index(q));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);

  LowRankState st;
  st.rank = rank;
  st.g_hat = pinv.g_hat;
  const auto& sv = svd.singularValues();
  st.singular_values.assign(sv.data(), sv.data() + sv.size());
  st.left = DenseMatrix(n, rank);
  st.right = DenseMatrix(q, rank);
  for (std::size_t r = 0; r < rank; ++r) {
    std::vector<double> x(n), y(q);
    for (std::size_t i = 0; i < n; ++i) x[i] = st.left(i, r) = svd.matrixU()(Eigen::Index(i), Eigen::Index(r));
    for (std::size_t j = 0; j < q; ++j) {
      st.right(j, r) = svd.matrixV()(Eigen::Index(j), Eigen::Index(r));
      y[j] = st.singular_values[r] * st.right(j, r);
    }
    st.m_n.push_back(spectral_product(pinv.bases[0], x));
    st.m_q.push_back(spectral_product(pinv.bases[1], y));
  }
  return st;
}

DenseTensor lowrank_apply(const LowRankState& st, const DenseTensor& r, OpCounter* counter, WarningSink* warnings) {
  require_same_shape(st.g_hat, r, "lowrank_apply");
  DenseTensor z(r.shape());
  for (std::size_t rho = 0; rho < st.rank; ++rho) {
    const DenseTensor term = linear_transform(st.m_n[rho], st.m_q[rho], std::nullopt, r, counter);
    if (rho == 0) {
      z = term;
    } else {
      auto zs = z.data();
      const auto ts = term.data();
      for (std::size_t i = 0; i < zs.size(); ++i) zs[i] += ts[i];
      count(counter, z.size());
    }
  }
  if (warnings != nullptr) {
    const double zr = inner(z, r);
    if (zr <= 0.0) {
      std::ostringstream os;
      os << "lowrank(r=" << st.rank << ") preconditioner is indefinite on this residual: <Z,R> = " << zr;
      warnings->push_back(os.str());
    }
  }
  return z;
}

double lowrank_truncation_error(const LowRankState& st) {
  double tail = 0.0;
  for (std::size_t i = st.rank; i < st.singular_values.size(); ++i) tail += st.singular_values[i] * st.singular_values[i];
  return std::sqrt(tail);
}

// ---------------------------------------------------------------------------
// Wrappers and configuration

DenseTensor IdentityPreconditioner::apply(const DenseTensor& r, OpCounter*, WarningSink*) const { return r; }

JacobiPreconditioner::JacobiPreconditioner(const PoissonOperator& op, int sweeps, double omega)
    : state_(jacobi_init(op, sweeps, omega)) {}

DenseTensor JacobiPreconditioner::apply(const DenseTensor& r, OpCounter* counter, WarningSink*) const {
  return jacobi_apply(state_, r, counter);
}

std::string JacobiPreconditioner::describe() const {
  std::ostringstream os;
  os << "jacobi:p=" << state_.sweeps << ",omega=" << state_.omega;
  return os.str();
}

PinvPreconditioner::PinvPreconditioner(const PoissonOperator& op, SpectrumSource source)
    : state_(pinv_init(op, source)) {}

DenseTensor PinvPreconditioner::apply(const DenseTensor& r, OpCounter* counter, WarningSink*) const {
  return pinv_apply(state_, r, counter);
}

LowRankPreconditioner::LowRankPreconditioner(const PoissonOperator& op, std::size_t rank, SpectrumSource source)
    : state_(lowrank_init(op, rank, source)) {}

DenseTensor LowRankPreconditioner::apply(const DenseTensor& r, OpCounter* counter, WarningSink* warnings) const {
  return lowrank_apply(state_, r, counter, warnings);
}

std::string LowRankPreconditioner::describe() const { return "lowrank:r=" + std::to_string(state_.rank); }

namespace {

double parse_number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    fail(ErrorCode::InvalidArgument, "preconditioner option " + key + ": '" + value + "' is not a number");
  }
  return v;
}

}  // namespace

PreconditionerConfig parse_preconditioner(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  PreconditionerConfig cfg;
  if (name == "none" || name == "identity") {
    cfg.kind = PreconditionerKind::Identity;
  } else if (name == "jacobi") {
    cfg.kind = PreconditionerKind::Jacobi;
  } else if (name == "lowrank") {
    cfg.kind = PreconditionerKind::LowRank;
  } else if (name == "pinv") {
    cfg.kind = PreconditionerKind::Pinv;
  } else {
    fail(ErrorCode::InvalidArgument, "unknown preconditioner '" + name + "'");
  }
  if (colon == std::string::npos) return cfg;

  std::stringstream opts(text.substr(colon + 1));
  std::string item;
  while (std::getline(opts, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorCode::InvalidArgument, "preconditioner option '" + item + "' needs key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (cfg.kind == PreconditionerKind::Jacobi && key == "p") {
      const double p = parse_number(key, value);
      if (p < 1 || p != std::floor(p)) fail(ErrorCode::InvalidArgument, "jacobi: p must be a positive integer");
      cfg.sweeps = int(p);
    } else if (cfg.kind == PreconditionerKind::Jacobi && key == "omega") {
      cfg.omega = parse_number(key, value);
    } else if (cfg.kind == PreconditionerKind::LowRank && key == "r") {
      const double r = parse_number(key, value);
      if (r < 1 || r != std::floor(r)) fail(ErrorCode::InvalidArgument, "lowrank: r must be a positive integer");
      cfg.rank = std::size_t(r);
    } else if ((cfg.kind == PreconditionerKind::Pinv || cfg.kind == PreconditionerKind::LowRank) &&
               key == "spectrum") {
      if (value == "numeric") {
        cfg.source = SpectrumSource::Numeric;
      } else if (value == "analytic") {
        cfg.source = SpectrumSource::Analytic;
      } else {
        fail(ErrorCode::InvalidArgument, "spectrum must be numeric or analytic");
      }
    } else {
      fail(ErrorCode::InvalidArgument, "unknown option '" + key + "' for preconditioner " + name);
    }
  }
  return cfg;
}

std::string to_string(const PreconditionerConfig& cfg) {
  std::ostringstream os;
  const char* analytic = cfg.source == SpectrumSource::Analytic ? "spectrum=analytic" : "";
  switch (cfg.kind) {
    case PreconditionerKind::Identity: os << "none"; break;
    case PreconditionerKind::Jacobi: os << "jacobi:p=" << cfg.sweeps << ",omega=" << cfg.omega; break;
    case PreconditionerKind::LowRank:
      os << "lowrank:r=" << cfg.rank << (*analytic ? "," : "") << analytic;
      break;
    case PreconditionerKind::Pinv: os << "pinv" << (*analytic ? ":" : "") << analytic; break;
  }
  return os.str();
}

std::unique_ptr<Preconditioner> make_preconditioner(const PoissonOperator& op, const PreconditionerConfig& cfg) {
  switch (cfg.kind) {
    case PreconditionerKind::Identity: return std::make_unique<IdentityPreconditioner>();
    case PreconditionerKind::Jacobi: return std::make_unique<JacobiPreconditioner>(op, cfg.sweeps, cfg.omega);
    case PreconditionerKind::LowRank: return std::make_unique<LowRankPreconditioner>(op, cfg.rank, cfg.source);
    case PreconditionerKind::Pinv: return std::make_unique<PinvPreconditioner>(op, cfg.source);
  }
  fail(ErrorCode::InvalidArgument, "unknown preconditioner kind");
}

}  // namespace kronpcg
