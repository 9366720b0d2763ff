#include "kronpcg/kronpcg_c.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "kronpcg/cost_model.hpp"
#include "kronpcg/error.hpp"
#include "kronpcg/experiment.hpp"
#include "kronpcg/io.hpp"
#include "kronpcg/pcg.hpp"
#include "kronpcg/preconditioners.hpp"
#include "kronpcg/problems.hpp"

using namespace kronpcg;

struct kp_tensor {
  DenseTensor t;
};

struct kp_operator {
  PoissonOperator op;
};

struct kp_boundary {
  BoundaryFile file;
};

struct kp_precond {
  std::unique_ptr<Preconditioner> m;
  std::string description;
};

struct kp_problem {
  Problem p;
};

struct kp_runlog {
  ConvergenceLog log;
  RunInfo info;
};

namespace {

thread_local std::string g_last_error;

kp_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return KP_ERR_INVALID_ARGUMENT;
    case ErrorCode::ShapeMismatch: return KP_ERR_SHAPE_MISMATCH;
    case ErrorCode::Unsupported: return KP_ERR_UNSUPPORTED;
    case ErrorCode::Numerical: return KP_ERR_NUMERICAL;
    case ErrorCode::Io: return KP_ERR_IO;
  }
  return KP_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into status codes.
template <class Fn>
kp_status guarded(Fn&& fn) {
  try {
    fn();
    return KP_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return KP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KP_ERR_INTERNAL;
  }
}

void require(bool cond, const char* what) {
  if (!cond) fail(ErrorCode::InvalidArgument, what);
}

Shape make_shape(std::size_t ndim, const std::size_t* dims) {
  require(dims != nullptr, "dims is NULL");
  require(ndim == 2 || ndim == 3, "ndim must be 2 or 3");
  return Shape(std::span<const std::size_t>(dims, ndim));
}

void fill_dims(const Shape& s, std::size_t dims[3]) {
  for (std::size_t m = 0; m < 3; ++m) dims[m] = s[m];
}

BoundaryCondition to_bc(kp_bc bc) {
  require(bc >= KP_BC_PERIODIC && bc <= KP_BC_NEUMANN_DIRICHLET, "unknown boundary condition");
  return static_cast<BoundaryCondition>(bc);
}

}  // namespace

extern "C" {

const char* kp_version(void) { return "0.1.0"; }
const char* kp_last_error(void) { return g_last_error.c_str(); }

const char* kp_status_name(kp_status status) {
  switch (status) {
    case KP_OK: return "ok";
    case KP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case KP_ERR_SHAPE_MISMATCH: return "shape mismatch";
    case KP_ERR_UNSUPPORTED: return "unsupported";
    case KP_ERR_NUMERICAL: return "numerical failure";
    case KP_ERR_IO: return "i/o error";
    case KP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

// ---- tensors

kp_status kp_tensor_create(size_t ndim, const size_t* dims, kp_tensor** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = new kp_tensor{DenseTensor(make_shape(ndim, dims))};
  });
}

kp_status kp_tensor_from_data(size_t ndim, const size_t* dims, const double* data, kp_tensor** out) {
  return guarded([&] {
    require(out != nullptr && data != nullptr, "NULL argument");
    const Shape shape = make_shape(ndim, dims);
    *out = new kp_tensor{DenseTensor(shape, std::vector<double>(data, data + shape.size()))};
  });
}

kp_status kp_tensor_clone(const kp_tensor* t, kp_tensor** out) {
  return guarded([&] {
    require(t != nullptr && out != nullptr, "NULL argument");
    *out = new kp_tensor{t->t};
  });
}

void kp_tensor_free(kp_tensor* t) { delete t; }
size_t kp_tensor_ndim(const kp_tensor* t) { return t->t.shape().ndim(); }
void kp_tensor_dims(const kp_tensor* t, size_t dims[3]) { fill_dims(t->t.shape(), dims); }
size_t kp_tensor_size(const kp_tensor* t) { return t->t.size(); }
double* kp_tensor_data(kp_tensor* t) { return t->t.data().data(); }
const double* kp_tensor_cdata(const kp_tensor* t) { return t->t.data().data(); }
double kp_tensor_norm(const kp_tensor* t) { return frobenius_norm(t->t); }
double kp_tensor_nullspace_component(const kp_tensor* t) { return nullspace_component(t->t); }
void kp_tensor_center(kp_tensor* t) { center_inplace(t->t); }

kp_status kp_tensor_read(const char* path, kp_tensor** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "NULL argument");
    *out = new kp_tensor{read_tensor(path)};
  });
}

kp_status kp_tensor_write(const kp_tensor* t, const char* path) {
  return guarded([&] {
    require(t != nullptr && path != nullptr, "NULL argument");
    write_tensor(path, t->t);
  });
}

// ---- operators

kp_status kp_bc_parse(const char* name, kp_bc* out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "NULL argument");
    *out = static_cast<kp_bc>(parse_boundary_condition(name));
  });
}

const char* kp_bc_name(kp_bc bc) {
  static const char* names[] = {"periodic", "dirichlet", "neumann", "dirichlet-neumann", "neumann-dirichlet"};
  return bc >= KP_BC_PERIODIC && bc <= KP_BC_NEUMANN_DIRICHLET ? names[bc] : "unknown";
}

kp_status kp_operator_create(size_t ndim, const size_t* dims, const kp_bc* bcs, kp_operator** out) {
  return guarded([&] {
    require(out != nullptr && bcs != nullptr, "NULL argument");
    const Shape shape = make_shape(ndim, dims);
    std::vector<BoundaryCondition> b;
    for (std::size_t m = 0; m < ndim; ++m) b.push_back(to_bc(bcs[m]));
    *out = new kp_operator{PoissonOperator(shape, b)};
  });
}

void kp_operator_free(kp_operator* op) { delete op; }
int kp_operator_is_singular(const kp_operator* op) { return op->op.is_singular() ? 1 : 0; }
size_t kp_operator_ndim(const kp_operator* op) { return op->op.ndim(); }
void kp_operator_dims(const kp_operator* op, size_t dims[3]) { fill_dims(op->op.shape(), dims); }

kp_status kp_operator_apply(const kp_operator* op, const kp_tensor* x, kp_tensor** out) {
  return guarded([&] {
    require(op != nullptr && x != nullptr && out != nullptr, "NULL argument");
    *out = new kp_tensor{op->op.apply(x->t)};
  });
}

kp_status kp_spectrum_1d(size_t n, kp_bc bc, int analytic, double* out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    const BoundaryCondition b = to_bc(bc);
    const SpectralDecomposition s = analytic ? analytic_spectrum(n, b) : numeric_spectrum(Laplacian1D(n, b));
    std::copy(s.eigenvalues.begin(), s.eigenvalues.end(), out);
  });
}

// ---- boundary data

kp_status kp_boundary_create(kp_boundary** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = new kp_boundary{};
  });
}

void kp_boundary_free(kp_boundary* b) { delete b; }

kp_status kp_boundary_set(kp_boundary* b, size_t axis, int at_end, kp_face_kind kind, double value) {
  return guarded([&] {
    require(b != nullptr, "boundary is NULL");
    require(axis < 3, "axis must be 0, 1 or 2");
    require(kind == KP_FACE_POTENTIAL || kind == KP_FACE_FIELD, "unknown face kind");
    const FaceValue f{kind == KP_FACE_POTENTIAL ? FaceKind::Potential : FaceKind::Field, value};
    if (at_end) b->file.data.directions[axis].end = f;
    else b->file.data.directions[axis].begin = f;
  });
}

int kp_boundary_applied(const kp_boundary* b) { return b != nullptr && b->file.applied ? 1 : 0; }

int kp_boundary_empty(const kp_boundary* b) { return b == nullptr || b->file.data.empty() ? 1 : 0; }

kp_status kp_boundary_read(const char* path, kp_boundary** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "NULL argument");
    *out = new kp_boundary{boundary_from_json(read_file(path))};
  });
}

kp_status kp_boundary_write(const kp_boundary* b, const char* path) {
  return guarded([&] {
    require(b != nullptr && path != nullptr, "NULL argument");
    write_file_atomic(path, boundary_to_json(b->file));
  });
}

kp_status kp_boundary_apply(const kp_operator* op, const kp_boundary* b, const kp_tensor* h, kp_tensor** out) {
  return guarded([&] {
    require(op != nullptr && b != nullptr && h != nullptr && out != nullptr, "NULL argument");
    validate_boundary_data(op->op, b->file.data);
    *out = new kp_tensor{b->file.applied ? h->t : apply_bc_updates(op->op, h->t, b->file.data)};
  });
}

// ---- preconditioners

kp_status kp_precond_create(const kp_operator* op, const char* spec, kp_precond** out) {
  return guarded([&] {
    require(op != nullptr && spec != nullptr && out != nullptr, "NULL argument");
    auto m = make_preconditioner(op->op, parse_preconditioner(spec));
    std::string d = m->describe();
    *out = new kp_precond{std::move(m), std::move(d)};
  });
}

void kp_precond_free(kp_precond* p) { delete p; }
const char* kp_precond_describe(const kp_precond* p) { return p->description.c_str(); }

kp_status kp_precond_apply(const kp_precond* p, const kp_tensor* r, kp_tensor** out) {
  return guarded([&] {
    require(p != nullptr && r != nullptr && out != nullptr, "NULL argument");
    *out = new kp_tensor{p->m->apply(r->t)};
  });
}

// ---- problems

void kp_problem_options_default(kp_problem_options* opts) {
  if (opts == nullptr) return;
  opts->seed = kDefaultSeed;
  opts->period = 0;
  opts->slope = 0;
}

kp_status kp_problem_generate(const char* name, const char* variant, const kp_problem_options* opts,
                              kp_problem** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "NULL argument");
    kp_problem_options o;
    kp_problem_options_default(&o);
    if (opts != nullptr) o = *opts;
    const std::string n = name;
    const std::string v = variant != nullptr ? variant : "";
    Problem p;
    if (n == "p1") {
      const Shape s = parse_shape(v.empty() ? "50x100" : v);
      if (s.ndim() != 2) fail(ErrorCode::InvalidArgument, "problem p1 is two-dimensional");
      p = gen_problem1(s[0], s[1], o.period, o.slope);
    } else if (n == "p2") {
      p = gen_problem2();
    } else if (n == "p3") {
      p = gen_problem3(v.empty() ? "3d_128x64x8" : v, o.seed);
    } else {
      fail(ErrorCode::InvalidArgument, "unknown problem '" + n + "' (expected p1, p2 or p3)");
    }
    *out = new kp_problem{std::move(p)};
  });
}

void kp_problem_free(kp_problem* p) { delete p; }
const char* kp_problem_name(const kp_problem* p) { return p->p.spec.name.c_str(); }
const char* kp_problem_variant(const kp_problem* p) { return p->p.spec.variant.c_str(); }
uint64_t kp_problem_seed(const kp_problem* p) { return p->p.spec.seed; }
double kp_problem_scale(const kp_problem* p) { return p->p.spec.scale; }

kp_status kp_problem_rhs(const kp_problem* p, kp_tensor** out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "NULL argument");
    *out = new kp_tensor{p->p.h};
  });
}

kp_status kp_problem_operator(const kp_problem* p, kp_operator** out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "NULL argument");
    *out = new kp_operator{p->p.spec.make_operator()};
  });
}

kp_status kp_problem_boundary(const kp_problem* p, kp_boundary** out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "NULL argument");
    *out = new kp_boundary{BoundaryFile{p->p.spec.boundary, true, p->p.spec.scale}};
  });
}

size_t kp_problem3_variant_count(void) { return problem3_variants().size(); }

const char* kp_problem3_variant(size_t index) {
  static const std::vector<std::string> names = problem3_variants();
  return index < names.size() ? names[index].c_str() : nullptr;
}

// ---- solver

void kp_solve_options_default(kp_solve_options* opts) {
  if (opts == nullptr) return;
  opts->max_iter = 10;
  opts->center = KP_CENTER_AUTO;
  opts->tol = 0.0;
  opts->record_true_residual = 1;
  opts->full_apply = 0;
}

kp_status kp_solve(const kp_operator* op, const kp_tensor* h, const kp_precond* precond, const kp_tensor* u0,
                   const kp_solve_options* opts, kp_tensor** solution, kp_runlog** log) {
  return guarded([&] {
    require(op != nullptr && h != nullptr, "NULL argument");
    kp_solve_options o;
    kp_solve_options_default(&o);
    if (opts != nullptr) o = *opts;

    SolverConfig cfg;
    cfg.max_iter = o.max_iter;
    cfg.center = o.center == KP_CENTER_ON ? CenterMode::On : o.center == KP_CENTER_OFF ? CenterMode::Off
                                                                                          : CenterMode::Auto;
    if (o.tol > 0.0) cfg.stop_tol = o.tol;
    cfg.record_true_residual = o.record_true_residual != 0;
    cfg.variant = o.full_apply ? ApplyVariant::Full : ApplyVariant::Sparse;

    const IdentityPreconditioner identity;
    const Preconditioner& m = precond != nullptr ? *precond->m : static_cast<const Preconditioner&>(identity);
    const DenseTensor zero = u0 == nullptr ? DenseTensor(op->op.shape()) : DenseTensor();
    SolveResult res = pcg(op->op, h->t, m, u0 != nullptr ? u0->t : zero, cfg);

    auto rl = std::make_unique<kp_runlog>();
    rl->info.shape = op->op.shape();
    rl->info.bcs = op->op.bcs();
    rl->info.preconditioner = m.describe();
    rl->info.config = cfg;
    rl->log = std::move(res.log);
    if (solution != nullptr) *solution = new kp_tensor{std::move(res.solution)};
    if (log != nullptr) *log = rl.release();
  });
}

void kp_runlog_free(kp_runlog* log) { delete log; }
size_t kp_runlog_count(const kp_runlog* log) { return log->log.records.size(); }

kp_status kp_runlog_iteration(const kp_runlog* log, size_t index, kp_iteration* out) {
  return guarded([&] {
    require(log != nullptr && out != nullptr, "NULL argument");
    require(index < log->log.records.size(), "iteration index out of range");
    const IterationRecord& r = log->log.records[index];
    out->s = r.s;
    out->alpha = r.alpha;
    out->beta = r.beta;
    out->rho = r.rho;
    out->computed_res = r.computed_residual;
    out->true_res = r.true_residual;
    out->kappa = r.kappa;
    out->eta_scaled = index < log->log.eta.scaled.size() ? log->log.eta.scaled[index] : 0.0;
    out->null_norm = r.null_norm;
    out->solution_norm = r.solution_norm;
    out->ops_cum = r.ops_cum;
  });
}

kp_solve_status kp_runlog_status(const kp_runlog* log) {
  switch (log->log.status) {
    case SolveStatus::MaxIterations: return KP_SOLVE_MAX_ITER;
    case SolveStatus::Converged: return KP_SOLVE_CONVERGED;
    case SolveStatus::Breakdown: return KP_SOLVE_BREAKDOWN;
  }
  return KP_SOLVE_MAX_ITER;
}

const char* kp_runlog_breakdown_reason(const kp_runlog* log) { return log->log.breakdown_reason.c_str(); }
double kp_runlog_rhs_norm(const kp_runlog* log) { return log->log.rhs_norm; }
size_t kp_runlog_warning_count(const kp_runlog* log) { return log->log.warnings.size(); }

const char* kp_runlog_warning(const kp_runlog* log, size_t index) {
  return index < log->log.warnings.size() ? log->log.warnings[index].c_str() : nullptr;
}

int kp_runlog_iterations_to(const kp_runlog* log, double rel_tol, size_t* out) {
  const auto it = iterations_to(log->log, rel_tol);
  if (!it) return 0;
  if (out != nullptr) *out = *it;
  return 1;
}

kp_status kp_runlog_write_json(const kp_runlog* log, const char* path, const char* problem, int has_seed,
                               uint64_t seed) {
  return guarded([&] {
    require(log != nullptr && path != nullptr, "NULL argument");
    RunInfo info = log->info;
    info.problem = problem != nullptr ? problem : "";
    if (has_seed) info.seed = seed;
    write_file_atomic(path, run_log_json(info, log->log));
  });
}

kp_status kp_jacobi_standalone(const kp_operator* op, const kp_tensor* h, double omega, size_t max_iters,
                               double stop_below, double* residuals, uint64_t* ops_cum, size_t* steps,
                               int* diverged) {
  return guarded([&] {
    require(op != nullptr && h != nullptr && residuals != nullptr && steps != nullptr, "NULL argument");
    const std::optional<double> stop = stop_below > 0.0 ? std::optional<double>(stop_below) : std::nullopt;
    const StationaryRun run = jacobi_standalone(op->op, h->t, omega, max_iters, DenseTensor(op->op.shape()), stop);
    std::copy(run.residuals.begin(), run.residuals.end(), residuals);
    if (ops_cum != nullptr) std::copy(run.ops_cum.begin(), run.ops_cum.end(), ops_cum);
    *steps = run.residuals.size() - 1;
    if (diverged != nullptr) *diverged = run.diverged ? 1 : 0;
  });
}

kp_status kp_cost_model(size_t ndim, const size_t* dims, int iteration, int full_apply, uint64_t* out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = cost_model(make_shape(ndim, dims), iteration ? CostPhase::Iter : CostPhase::Init,
                      full_apply ? ApplyVariant::Full : ApplyVariant::Sparse);
  });
}

kp_status kp_pinv_apply_cost(size_t ndim, const size_t* dims, uint64_t* out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = pinv_apply_cost(make_shape(ndim, dims));
  });
}

}  // extern "C"
