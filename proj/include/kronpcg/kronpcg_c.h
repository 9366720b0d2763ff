#ifndef KRONPCG_C_H
#define KRONPCG_C_H

/* C interface of the kronpcg library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function (which accepts NULL). Every fallible call returns
 * a kp_status; on failure, kp_last_error() describes the problem. The message
 * is thread-local and valid until the next failing call on that thread.
 * Output handles are only written on success. */

#include <stddef.h>
#include <stdint.h>

#if defined(KRONPCG_BUILDING_LIBRARY)
#define KP_API __attribute__((visibility("default")))
#else
#define KP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kp_status {
  KP_OK = 0,
  KP_ERR_INVALID_ARGUMENT = 1,
  KP_ERR_SHAPE_MISMATCH = 2,
  KP_ERR_UNSUPPORTED = 3,
  KP_ERR_NUMERICAL = 4,
  KP_ERR_IO = 5,
  KP_ERR_INTERNAL = 6
} kp_status;

typedef enum kp_bc {
  KP_BC_PERIODIC = 0,
  KP_BC_DIRICHLET = 1,
  KP_BC_NEUMANN = 2,
  KP_BC_DIRICHLET_NEUMANN = 3,
  KP_BC_NEUMANN_DIRICHLET = 4
} kp_bc;

typedef enum kp_face_kind { KP_FACE_POTENTIAL = 0, KP_FACE_FIELD = 1 } kp_face_kind;
typedef enum kp_center_mode { KP_CENTER_AUTO = 0, KP_CENTER_ON = 1, KP_CENTER_OFF = 2 } kp_center_mode;
typedef enum kp_solve_status { KP_SOLVE_MAX_ITER = 0, KP_SOLVE_CONVERGED = 1, KP_SOLVE_BREAKDOWN = 2 } kp_solve_status;

typedef struct kp_tensor kp_tensor;
typedef struct kp_operator kp_operator;
typedef struct kp_boundary kp_boundary;
typedef struct kp_precond kp_precond;
typedef struct kp_problem kp_problem;
typedef struct kp_runlog kp_runlog;

KP_API const char* kp_version(void);
KP_API const char* kp_last_error(void);
KP_API const char* kp_status_name(kp_status status);

/* ---- tensors (2 or 3 dims, first index fastest) ---- */
KP_API kp_status kp_tensor_create(size_t ndim, const size_t* dims, kp_tensor** out);
KP_API kp_status kp_tensor_from_data(size_t ndim, const size_t* dims, const double* data, kp_tensor** out);
KP_API kp_status kp_tensor_clone(const kp_tensor* t, kp_tensor** out);
KP_API void kp_tensor_free(kp_tensor* t);
KP_API size_t kp_tensor_ndim(const kp_tensor* t);
/* Writes 3 extents; unused trailing extents are 1. */
KP_API void kp_tensor_dims(const kp_tensor* t, size_t dims[3]);
KP_API size_t kp_tensor_size(const kp_tensor* t);
KP_API double* kp_tensor_data(kp_tensor* t);
KP_API const double* kp_tensor_cdata(const kp_tensor* t);
KP_API double kp_tensor_norm(const kp_tensor* t);
KP_API double kp_tensor_nullspace_component(const kp_tensor* t);
KP_API void kp_tensor_center(kp_tensor* t);
KP_API kp_status kp_tensor_read(const char* path, kp_tensor** out);
KP_API kp_status kp_tensor_write(const kp_tensor* t, const char* path);

/* ---- boundary conditions and operators ---- */
KP_API kp_status kp_bc_parse(const char* name, kp_bc* out);
KP_API const char* kp_bc_name(kp_bc bc);

KP_API kp_status kp_operator_create(size_t ndim, const size_t* dims, const kp_bc* bcs, kp_operator** out);
KP_API void kp_operator_free(kp_operator* op);
KP_API int kp_operator_is_singular(const kp_operator* op);
KP_API size_t kp_operator_ndim(const kp_operator* op);
KP_API void kp_operator_dims(const kp_operator* op, size_t dims[3]);
KP_API kp_status kp_operator_apply(const kp_operator* op, const kp_tensor* x, kp_tensor** out);

/* Eigenvalues of the n x n 1D factor in ascending order; `out` holds n values. */
KP_API kp_status kp_spectrum_1d(size_t n, kp_bc bc, int analytic, double* out);

/* ---- boundary data (constant per face) ---- */
KP_API kp_status kp_boundary_create(kp_boundary** out);
KP_API void kp_boundary_free(kp_boundary* b);
/* axis 0..2; at_end = 0 for the first slice, 1 for the last. */
KP_API kp_status kp_boundary_set(kp_boundary* b, size_t axis, int at_end, kp_face_kind kind, double value);
KP_API int kp_boundary_empty(const kp_boundary* b);
/* Nonzero when the face updates are already part of the matching right-hand
 * side (boundary data returned for a generated problem). */
KP_API int kp_boundary_applied(const kp_boundary* b);
KP_API kp_status kp_boundary_read(const char* path, kp_boundary** out);
KP_API kp_status kp_boundary_write(const kp_boundary* b, const char* path);
/* Validates `b` against the operator's BCs and returns H plus the face
 * updates (H unchanged if the data is marked as applied). */
KP_API kp_status kp_boundary_apply(const kp_operator* op, const kp_boundary* b, const kp_tensor* h, kp_tensor** out);

/* ---- preconditioners ----
 * spec: "none" | "pinv" | "jacobi:p=3,omega=1.3" | "lowrank:r=3", optionally
 * with ",spectrum=analytic" for pinv/lowrank. */
KP_API kp_status kp_precond_create(const kp_operator* op, const char* spec, kp_precond** out);
KP_API void kp_precond_free(kp_precond* p);
KP_API const char* kp_precond_describe(const kp_precond* p);
KP_API kp_status kp_precond_apply(const kp_precond* p, const kp_tensor* r, kp_tensor** out);

/* ---- test problems ---- */
typedef struct kp_problem_options {
  uint64_t seed;   /* problem p3 */
  size_t period;   /* problem p1; 0 = default */
  size_t slope;    /* problem p1; 0 = default */
} kp_problem_options;

KP_API void kp_problem_options_default(kp_problem_options* opts);
/* name: "p1" (variant "NxQ"), "p2" (variant ignored), "p3" (variant tag such
 * as "3d_128x64x8"). opts may be NULL. */
KP_API kp_status kp_problem_generate(const char* name, const char* variant, const kp_problem_options* opts,
                                     kp_problem** out);
KP_API void kp_problem_free(kp_problem* p);
KP_API const char* kp_problem_name(const kp_problem* p);
KP_API const char* kp_problem_variant(const kp_problem* p);
KP_API uint64_t kp_problem_seed(const kp_problem* p);
/* Normalization factor applied to the raw right-hand side. */
KP_API double kp_problem_scale(const kp_problem* p);
KP_API kp_status kp_problem_rhs(const kp_problem* p, kp_tensor** out);
KP_API kp_status kp_problem_operator(const kp_problem* p, kp_operator** out);
/* Boundary data marked as applied; empty for problems without prescribed faces. */
KP_API kp_status kp_problem_boundary(const kp_problem* p, kp_boundary** out);
KP_API size_t kp_problem3_variant_count(void);
KP_API const char* kp_problem3_variant(size_t index);

/* ---- solver ---- */
typedef struct kp_solve_options {
  size_t max_iter;
  kp_center_mode center;
  double tol;               /* stop once ||H - A U|| <= tol ||H||; <= 0 disables */
  int record_true_residual; /* nonzero: log true residual and kappa per iterate */
  int full_apply;           /* nonzero: apply the operator with dense 1D matrices */
} kp_solve_options;

KP_API void kp_solve_options_default(kp_solve_options* opts);

/* precond NULL = identity, u0 NULL = zero. Breakdown is not an error: the
 * call succeeds and kp_runlog_status reports KP_SOLVE_BREAKDOWN. */
KP_API kp_status kp_solve(const kp_operator* op, const kp_tensor* h, const kp_precond* precond, const kp_tensor* u0,
                          const kp_solve_options* opts, kp_tensor** solution, kp_runlog** log);

typedef struct kp_iteration {
  size_t s;
  double alpha, beta, rho;
  double computed_res, true_res, kappa, eta_scaled, null_norm, solution_norm;
  uint64_t ops_cum;
} kp_iteration;

KP_API void kp_runlog_free(kp_runlog* log);
KP_API size_t kp_runlog_count(const kp_runlog* log);
KP_API kp_status kp_runlog_iteration(const kp_runlog* log, size_t index, kp_iteration* out);
KP_API kp_solve_status kp_runlog_status(const kp_runlog* log);
KP_API const char* kp_runlog_breakdown_reason(const kp_runlog* log);
KP_API double kp_runlog_rhs_norm(const kp_runlog* log);
KP_API size_t kp_runlog_warning_count(const kp_runlog* log);
KP_API const char* kp_runlog_warning(const kp_runlog* log, size_t index);
/* First iteration with true residual <= rel_tol ||H||; returns 0 if none. */
KP_API int kp_runlog_iterations_to(const kp_runlog* log, double rel_tol, size_t* out);
/* problem may be NULL; seed is written only if has_seed is nonzero. */
KP_API kp_status kp_runlog_write_json(const kp_runlog* log, const char* path, const char* problem, int has_seed,
                                      uint64_t seed);

/* ---- stand-alone weighted Jacobi ----
 * residuals (and ops_cum, if non-NULL) must hold max_iters + 1 values;
 * *steps receives the number of steps taken. stop_below <= 0 disables the
 * early stop. */
KP_API kp_status kp_jacobi_standalone(const kp_operator* op, const kp_tensor* h, double omega, size_t max_iters,
                                      double stop_below, double* residuals, uint64_t* ops_cum, size_t* steps,
                                      int* diverged);

/* ---- cost model ---- */
KP_API kp_status kp_cost_model(size_t ndim, const size_t* dims, int iteration, int full_apply, uint64_t* out);
KP_API kp_status kp_pinv_apply_cost(size_t ndim, const size_t* dims, uint64_t* out);

#ifdef __cplusplus
}
#endif

#endif /* KRONPCG_C_H */
