// Exercises the shared library through its C interface only.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "kronpcg/kronpcg_c.h"

namespace {

struct TensorGuard {
  kp_tensor* t = nullptr;
  ~TensorGuard() { kp_tensor_free(t); }
};

kp_operator* make_op(std::vector<size_t> dims, std::vector<kp_bc> bcs) {
  kp_operator* op = nullptr;
  EXPECT_EQ(kp_operator_create(dims.size(), dims.data(), bcs.data(), &op), KP_OK) << kp_last_error();
  return op;
}

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_NE(std::string(kp_version()), "");
  EXPECT_STREQ(kp_status_name(KP_OK), "ok");
  EXPECT_STREQ(kp_status_name(KP_ERR_UNSUPPORTED), "unsupported");
}

TEST(CApi, InvalidArgumentsReportErrors) {
  const size_t dims[2] = {2, 5};
  const kp_bc bcs[2] = {KP_BC_DIRICHLET, KP_BC_DIRICHLET};
  kp_operator* op = nullptr;
  EXPECT_EQ(kp_operator_create(2, dims, bcs, &op), KP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(op, nullptr);
  EXPECT_NE(std::string(kp_last_error()), "");
  EXPECT_EQ(kp_operator_create(2, dims, bcs, nullptr), KP_ERR_INVALID_ARGUMENT);

  kp_bc bc;
  EXPECT_EQ(kp_bc_parse("robin", &bc), KP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(kp_bc_parse("neumann-dirichlet", &bc), KP_OK);
  EXPECT_EQ(bc, KP_BC_NEUMANN_DIRICHLET);
  EXPECT_STREQ(kp_bc_name(KP_BC_PERIODIC), "periodic");

  kp_tensor* t = nullptr;
  EXPECT_EQ(kp_tensor_read("/nonexistent/file.kten", &t), KP_ERR_IO);
}

TEST(CApi, TensorLifecycle) {
  const size_t dims[3] = {2, 3, 4};
  std::vector<double> values(24);
  for (size_t i = 0; i < 24; ++i) values[i] = double(i);
  TensorGuard a;
  ASSERT_EQ(kp_tensor_from_data(3, dims, values.data(), &a.t), KP_OK);
  EXPECT_EQ(kp_tensor_ndim(a.t), 3u);
  EXPECT_EQ(kp_tensor_size(a.t), 24u);
  size_t d[3];
  kp_tensor_dims(a.t, d);
  EXPECT_EQ(d[2], 4u);
  EXPECT_EQ(kp_tensor_cdata(a.t)[5], 5.0);
  TensorGuard b;
  ASSERT_EQ(kp_tensor_clone(a.t, &b.t), KP_OK);
  kp_tensor_center(b.t);
  EXPECT_LE(kp_tensor_nullspace_component(b.t), 1e-13);
  EXPECT_NEAR(kp_tensor_norm(a.t), std::sqrt(23.0 * 24.0 * 47.0 / 6.0), 1e-12);

  const auto path = (std::filesystem::temp_directory_path() / "kronpcg_capi.kten").string();
  ASSERT_EQ(kp_tensor_write(a.t, path.c_str()), KP_OK);
  TensorGuard c;
  ASSERT_EQ(kp_tensor_read(path.c_str(), &c.t), KP_OK);
  for (size_t i = 0; i < 24; ++i) EXPECT_EQ(kp_tensor_cdata(c.t)[i], values[i]);
  std::filesystem::remove(path);
}

TEST(CApi, SpectrumAndOperator) {
  double ev[3];
  ASSERT_EQ(kp_spectrum_1d(3, KP_BC_DIRICHLET, 1, ev), KP_OK);
  EXPECT_NEAR(ev[0], 2 - std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(ev[2], 2 + std::sqrt(2.0), 1e-15);

  kp_operator* op = make_op({4, 5}, {KP_BC_PERIODIC, KP_BC_NEUMANN});
  EXPECT_TRUE(kp_operator_is_singular(op));
  const size_t dims[2] = {4, 5};
  TensorGuard ones, out;
  ASSERT_EQ(kp_tensor_create(2, dims, &ones.t), KP_OK);
  for (size_t i = 0; i < 20; ++i) kp_tensor_data(ones.t)[i] = 1.0;
  ASSERT_EQ(kp_operator_apply(op, ones.t, &out.t), KP_OK);
  EXPECT_LE(kp_tensor_norm(out.t), 1e-14);

  const size_t wrong[2] = {5, 4};
  TensorGuard bad, bad_out;
  ASSERT_EQ(kp_tensor_create(2, wrong, &bad.t), KP_OK);
  EXPECT_EQ(kp_operator_apply(op, bad.t, &bad_out.t), KP_ERR_SHAPE_MISMATCH);
  kp_operator_free(op);
}

TEST(CApi, SolveProblemWithPinv) {
  kp_problem* p = nullptr;
  ASSERT_EQ(kp_problem_generate("p1", "50x100", nullptr, &p), KP_OK) << kp_last_error();
  kp_operator* op = nullptr;
  TensorGuard h;
  ASSERT_EQ(kp_problem_operator(p, &op), KP_OK);
  ASSERT_EQ(kp_problem_rhs(p, &h.t), KP_OK);
  EXPECT_NEAR(kp_tensor_norm(h.t), 1.0 / 5000.0, 1e-18);

  kp_precond* m = nullptr;
  ASSERT_EQ(kp_precond_create(op, "pinv", &m), KP_OK);
  EXPECT_STREQ(kp_precond_describe(m), "pinv");
  kp_solve_options opts;
  kp_solve_options_default(&opts);
  EXPECT_EQ(opts.max_iter, 10u);
  TensorGuard u;
  kp_runlog* log = nullptr;
  ASSERT_EQ(kp_solve(op, h.t, m, nullptr, &opts, &u.t, &log), KP_OK) << kp_last_error();
  EXPECT_LE(kp_runlog_count(log), 11u);
  EXPECT_NE(kp_runlog_status(log), KP_SOLVE_BREAKDOWN);
  size_t it = 0;
  ASSERT_EQ(kp_runlog_iterations_to(log, 1e-10, &it), 1);
  EXPECT_LE(it, 3u);
  kp_iteration rec;
  ASSERT_EQ(kp_runlog_iteration(log, 0, &rec), KP_OK);
  EXPECT_DOUBLE_EQ(rec.true_res, 1.0 / 5000.0);
  EXPECT_EQ(kp_runlog_iteration(log, 99, &rec), KP_ERR_INVALID_ARGUMENT);

  const auto path = (std::filesystem::temp_directory_path() / "kronpcg_capi_log.json").string();
  EXPECT_EQ(kp_runlog_write_json(log, path.c_str(), "p1", 0, 0), KP_OK);
  EXPECT_TRUE(std::filesystem::exists(path));
  std::filesystem::remove(path);

  kp_runlog_free(log);
  kp_precond_free(m);
  kp_operator_free(op);
  kp_problem_free(p);
}

TEST(CApi, LowRankRejects3D) {
  kp_operator* op = make_op({4, 5, 6}, {KP_BC_PERIODIC, KP_BC_PERIODIC, KP_BC_PERIODIC});
  kp_precond* m = nullptr;
  EXPECT_EQ(kp_precond_create(op, "lowrank:r=2", &m), KP_ERR_UNSUPPORTED);
  EXPECT_NE(std::string(kp_last_error()).find("2D-only"), std::string::npos);
  EXPECT_EQ(kp_precond_create(op, "jacobi:p=0", &m), KP_ERR_INVALID_ARGUMENT);
  kp_operator_free(op);
}

TEST(CApi, UncenteredSingularRightHandSideIsRejected) {
  kp_operator* op = make_op({4, 5}, {KP_BC_PERIODIC, KP_BC_PERIODIC});
  const size_t dims[2] = {4, 5};
  TensorGuard h, u;
  ASSERT_EQ(kp_tensor_create(2, dims, &h.t), KP_OK);
  kp_tensor_data(h.t)[0] = 1.0;
  kp_runlog* log = nullptr;
  EXPECT_EQ(kp_solve(op, h.t, nullptr, nullptr, nullptr, &u.t, &log), KP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(log, nullptr);
  kp_operator_free(op);
}

TEST(CApi, BoundaryDataOfGeneratedProblem) {
  kp_problem* p = nullptr;
  ASSERT_EQ(kp_problem_generate("p2", nullptr, nullptr, &p), KP_OK);
  kp_boundary* b = nullptr;
  ASSERT_EQ(kp_problem_boundary(p, &b), KP_OK);
  EXPECT_FALSE(kp_boundary_empty(b));
  EXPECT_TRUE(kp_boundary_applied(b));
  kp_operator* op = nullptr;
  TensorGuard h, h2;
  ASSERT_EQ(kp_problem_operator(p, &op), KP_OK);
  ASSERT_EQ(kp_problem_rhs(p, &h.t), KP_OK);
  // Already applied: H comes back unchanged.
  ASSERT_EQ(kp_boundary_apply(op, b, h.t, &h2.t), KP_OK);
  for (size_t i = 0; i < kp_tensor_size(h.t); ++i) ASSERT_EQ(kp_tensor_cdata(h.t)[i], kp_tensor_cdata(h2.t)[i]);

  kp_boundary* fresh = nullptr;
  ASSERT_EQ(kp_boundary_create(&fresh), KP_OK);
  EXPECT_EQ(kp_boundary_set(fresh, 1, 0, KP_FACE_POTENTIAL, 1.0), KP_OK);
  TensorGuard h3;
  EXPECT_EQ(kp_boundary_apply(op, fresh, h.t, &h3.t), KP_ERR_INVALID_ARGUMENT);  // y is periodic
  EXPECT_EQ(kp_boundary_set(fresh, 3, 0, KP_FACE_POTENTIAL, 1.0), KP_ERR_INVALID_ARGUMENT);
  kp_boundary_free(fresh);
  kp_boundary_free(b);
  kp_operator_free(op);
  kp_problem_free(p);
}

TEST(CApi, Problem3Variants) {
  ASSERT_EQ(kp_problem3_variant_count(), 4u);
  EXPECT_STREQ(kp_problem3_variant(0), "2d_512x256");
  EXPECT_EQ(kp_problem3_variant(4), nullptr);
  kp_problem* p = nullptr;
  EXPECT_EQ(kp_problem_generate("p9", nullptr, nullptr, &p), KP_ERR_INVALID_ARGUMENT);
}

TEST(CApi, JacobiStandaloneAndCosts) {
  kp_operator* op = make_op({6, 7}, {KP_BC_DIRICHLET, KP_BC_DIRICHLET});
  const size_t dims[2] = {6, 7};
  TensorGuard h;
  ASSERT_EQ(kp_tensor_create(2, dims, &h.t), KP_OK);
  for (size_t i = 0; i < 42; ++i) kp_tensor_data(h.t)[i] = std::sin(double(i));
  std::vector<double> res(501);
  std::vector<uint64_t> ops(501);
  size_t steps = 0;
  int diverged = -1;
  ASSERT_EQ(kp_jacobi_standalone(op, h.t, 1.0, 500, 0.0, res.data(), ops.data(), &steps, &diverged), KP_OK);
  EXPECT_EQ(steps, 500u);
  EXPECT_EQ(diverged, 0);
  EXPECT_LT(res[500], 1e-6 * res[0]);
  EXPECT_GT(ops[1], 0u);

  uint64_t c = 0;
  const size_t d2[2] = {50, 100};
  ASSERT_EQ(kp_cost_model(2, d2, 1, 0, &c), KP_OK);
  EXPECT_EQ(c, 22u * 5000u);
  ASSERT_EQ(kp_pinv_apply_cost(2, d2, &c), KP_OK);
  EXPECT_EQ(c, 4u * 5000u * 150u + 5000u);
  kp_operator_free(op);
}
