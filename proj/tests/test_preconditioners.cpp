#include <gtest/gtest.h>

#include "kronpcg/error.hpp"
#include "kronpcg/preconditioners.hpp"
#include "test_support.hpp"

using namespace kronpcg;
namespace ts = testing_support;
using BC = BoundaryCondition;

namespace {

PoissonOperator random_op(std::size_t ndim, std::size_t max_dim) {
  std::vector<std::size_t> dims;
  std::vector<BC> bcs;
  for (std::size_t m = 0; m < ndim; ++m) {
    dims.push_back(ts::uniform_int(3, max_dim));
    bcs.push_back(ts::random_bc());
  }
  return PoissonOperator(Shape(std::span<const std::size_t>(dims)), bcs);
}

// p weighted-Jacobi steps on A x = r from x = 0, with A = omega*D + O.
Eigen::VectorXd dense_jacobi(const Eigen::MatrixXd& a, const Eigen::VectorXd& r, int p, double omega) {
  const Eigen::VectorXd d = omega * a.diagonal();
  Eigen::MatrixXd o = a;
  o.diagonal() -= d;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(r.size());
  for (int k = 0; k < p; ++k) x = (r - o * x).cwiseQuotient(d);
  return x;
}

}  // namespace

TEST(Jacobi, MatchesDenseSplitting) {
  for (int trial = 0; trial < 30; ++trial) {
    const PoissonOperator op = random_op(ts::uniform_int(2, 3), 6);
    const int p = int(ts::uniform_int(1, 5));
    const double omega = ts::uniform(1.0, 1.5);
    const DenseTensor r = ts::random_tensor(op.shape());
    const Eigen::MatrixXd a = ts::assembled(op.shape(), op.bcs());
    const DenseTensor z = jacobi_apply(jacobi_init(op, p, omega), r);
    const Eigen::VectorXd ref = dense_jacobi(a, ts::to_eigen(r), p, omega);
    EXPECT_LE((ts::to_eigen(z) - ref).norm(), 1e-12 * (1 + ref.norm()));
  }
}

TEST(Jacobi, OffPartKeepsScaledDiagonal) {
  const PoissonOperator op(Shape{4, 5}, std::vector{BC::Neumann, BC::Dirichlet});
  const JacobiState st = jacobi_init(op, 2, 1.3);
  const DenseMatrix o = st.off_part_dense(0);
  EXPECT_NEAR(o(0, 0), (1 - 1.3) * 1.0, 1e-15);
  EXPECT_NEAR(o(1, 1), (1 - 1.3) * 2.0, 1e-15);
  EXPECT_EQ(o(0, 1), -1.0);
  EXPECT_NEAR(st.inv_diag(0, 0), 1.0 / (1.3 * 3.0), 1e-15);
}

TEST(Jacobi, RejectsBadParameters) {
  const PoissonOperator op(Shape{4, 5}, std::vector(2, BC::Dirichlet));
  EXPECT_THROW(jacobi_init(op, 0, 1.0), Error);
  EXPECT_THROW(jacobi_init(op, 1, 0.9), Error);
}

TEST(Jacobi, StandaloneConvergesOnNonsingularProblem) {
  const PoissonOperator op(Shape{8, 6}, std::vector(2, BC::Dirichlet));
  const DenseTensor h = ts::random_tensor(op.shape());
  const StationaryRun run = jacobi_standalone(op, h, 1.0, 2000, DenseTensor(op.shape()), 1e-10);
  ASSERT_TRUE(run.reached_at.has_value());
  EXPECT_FALSE(run.diverged);
  EXPECT_EQ(run.residuals.size(), *run.reached_at + 1);
  EXPECT_EQ(run.ops_cum.size(), run.residuals.size());
  EXPECT_LE(run.residuals.back(), 1e-10);
  // Dense solve agrees.
  const Eigen::VectorXd u = ts::assembled(op.shape(), op.bcs()).ldlt().solve(ts::to_eigen(h));
  EXPECT_LE((ts::to_eigen(run.solution) - u).norm(), 1e-8);
}

TEST(Pinv, MatchesDensePseudoinverse) {
  for (int trial = 0; trial < 30; ++trial) {
    const PoissonOperator op = random_op(ts::uniform_int(2, 3), 6);
    const Eigen::MatrixXd pinv = ts::pseudoinverse(ts::assembled(op.shape(), op.bcs()));
    const DenseTensor r = ts::random_tensor(op.shape());
    for (auto src : {SpectrumSource::Numeric, SpectrumSource::Analytic}) {
      const DenseTensor z = pinv_apply(pinv_init(op, src), r);
      const Eigen::VectorXd ref = pinv * ts::to_eigen(r);
      EXPECT_LE((ts::to_eigen(z) - ref).norm(), 1e-10 * (1 + ref.norm())) << op.shape().str();
    }
  }
}

TEST(Pinv, SolvesCenteredSingularSystemExactly) {
  const PoissonOperator op(Shape{6, 8, 4}, std::vector(3, BC::Periodic));
  const DenseTensor h = center(ts::random_tensor(op.shape()));
  const DenseTensor u = pinv_apply(pinv_init(op), h);
  EXPECT_LE(frobenius_norm(saxpy(-1.0, op.apply(u), h)), 1e-12 * frobenius_norm(h));
  EXPECT_LE(nullspace_component(u), 1e-12 * frobenius_norm(u));
}

TEST(Pinv, CountMatchesClosedForm) {
  for (const Shape& s : {Shape{5, 7}, Shape{4, 6, 3}}) {
    std::vector<BC> bcs(s.ndim(), BC::Neumann);
    const PoissonOperator op(s, bcs);
    OpCounter c;
    (void)pinv_apply(pinv_init(op), ts::random_tensor(s), &c);
    std::uint64_t dim_sum = 0;
    for (auto d : s.dims()) dim_sum += d;
    EXPECT_EQ(c.ops, 4 * s.size() * dim_sum + s.size());
  }
}

TEST(LowRank, FullRankEqualsPinv) {
  for (int trial = 0; trial < 10; ++trial) {
    const PoissonOperator op = random_op(2, 12);
    const std::size_t rmax = std::min(op.shape()[0], op.shape()[1]);
    const LowRankState lr = lowrank_init(op, rmax);
    const PinvState pv = pinv_init(op);
    const DenseTensor r = ts::random_tensor(op.shape());
    const DenseTensor z1 = lowrank_apply(lr, r);
    const DenseTensor z2 = pinv_apply(pv, r);
    EXPECT_LE(frobenius_norm(saxpy(-1.0, z1, z2)), 1e-10 * (1 + frobenius_norm(z2)));
    EXPECT_LE(lowrank_truncation_error(lr), 1e-12);
  }
}

TEST(LowRank, TruncationErrorIsTailOfSpectrum) {
  const PoissonOperator op(Shape{6, 9}, std::vector{BC::Dirichlet, BC::Neumann});
  const LowRankState lr = lowrank_init(op, 2);
  // Independent SVD of G-hat.
  const Eigen::Map<const Eigen::MatrixXd> g(lr.g_hat.data().data(), 6, 9);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  double tail = 0.0;
  for (Eigen::Index i = 2; i < svd.singularValues().size(); ++i) tail += std::pow(svd.singularValues()(i), 2);
  EXPECT_NEAR(lowrank_truncation_error(lr), std::sqrt(tail), 1e-12);
  EXPECT_TRUE(std::is_sorted(lr.singular_values.rbegin(), lr.singular_values.rend()));
}

TEST(LowRank, RankOneIsSymmetricPositiveSemidefinite) {
  for (int trial = 0; trial < 10; ++trial) {
    const PoissonOperator op = random_op(2, 20);
    const LowRankState lr = lowrank_init(op, 1);
    const DenseTensor r1 = ts::random_tensor(op.shape());
    const DenseTensor r2 = ts::random_tensor(op.shape());
    const double a = inner(lowrank_apply(lr, r1), r2);
    const double b = inner(r1, lowrank_apply(lr, r2));
    EXPECT_NEAR(a, b, 1e-12 * (std::abs(a) + 1));
    EXPECT_GE(inner(lowrank_apply(lr, r1), r1), -1e-12 * inner(r1, r1));
  }
}

TEST(LowRank, ThreeDimensionalRequestIsRejected) {
  const PoissonOperator op(Shape{4, 4, 4}, std::vector(3, BC::Periodic));
  try {
    (void)lowrank_init(op, 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unsupported);
    EXPECT_STREQ(e.what(), "low-rank preconditioner is 2D-only");
  }
}

TEST(LowRank, RankOutOfRangeIsRejected) {
  const PoissonOperator op(Shape{4, 6}, std::vector(2, BC::Periodic));
  EXPECT_THROW(lowrank_init(op, 0), Error);
  EXPECT_THROW(lowrank_init(op, 5), Error);
}

TEST(LowRank, WarningFiresExactlyWhenNotPositive) {
  const PoissonOperator op(Shape{10, 14}, std::vector(2, BC::Periodic));
  const LowRankState lr = lowrank_init(op, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const DenseTensor r = center(ts::random_tensor(op.shape()));
    WarningSink sink;
    const DenseTensor z = lowrank_apply(lr, r, nullptr, &sink);
    const bool nonpositive = inner(z, r) <= 0.0;
    EXPECT_EQ(sink.size(), nonpositive ? 1u : 0u);
  }
  // A residual aligned with a negative direction of M always triggers it.
  Eigen::MatrixXd approx = Eigen::MatrixXd::Zero(10, 14);
  for (std::size_t k = 0; k < 3; ++k) {
    approx += lr.singular_values[k] * ts::to_eigen(lr.left).col(Eigen::Index(k)) *
              ts::to_eigen(lr.right).col(Eigen::Index(k)).transpose();
  }
  Eigen::Index bi = 0, bj = 0;
  if (approx.minCoeff(&bi, &bj) < 0.0) {
    // The spectral image of R is a single basis pair, so <Z, R> = approx(bi, bj).
    const PinvState pv = pinv_init(op);
    DenseTensor e(op.shape());
    e(std::size_t(bi), std::size_t(bj)) = 1.0;
    const DenseTensor r = linear_transform(pv.bases[0], pv.bases[1], std::nullopt, e);
    WarningSink sink;
    (void)lowrank_apply(lr, r, nullptr, &sink);
    EXPECT_EQ(sink.size(), 1u);
  }
}

TEST(Config, ParsesGrammar) {
  auto j = parse_preconditioner("jacobi:p=3,omega=1.3");
  EXPECT_EQ(j.kind, PreconditionerKind::Jacobi);
  EXPECT_EQ(j.sweeps, 3);
  EXPECT_DOUBLE_EQ(j.omega, 1.3);
  EXPECT_EQ(to_string(j), "jacobi:p=3,omega=1.3");
  auto l = parse_preconditioner("lowrank:r=4");
  EXPECT_EQ(l.kind, PreconditionerKind::LowRank);
  EXPECT_EQ(l.rank, 4u);
  EXPECT_EQ(parse_preconditioner("none").kind, PreconditionerKind::Identity);
  EXPECT_EQ(parse_preconditioner("pinv").kind, PreconditionerKind::Pinv);
  EXPECT_EQ(parse_preconditioner("pinv:spectrum=analytic").source, SpectrumSource::Analytic);
  EXPECT_EQ(to_string(parse_preconditioner("pinv:spectrum=analytic")), "pinv:spectrum=analytic");
  EXPECT_THROW(parse_preconditioner("ilu"), Error);
  EXPECT_THROW(parse_preconditioner("jacobi:p=0"), Error);
  EXPECT_THROW(parse_preconditioner("jacobi:p=1.5"), Error);
  EXPECT_THROW(parse_preconditioner("lowrank:omega=2"), Error);
  EXPECT_THROW(parse_preconditioner("jacobi:omega=abc"), Error);
}

TEST(Config, FactoryBuildsEveryKind) {
  const PoissonOperator op(Shape{5, 6}, std::vector(2, BC::Periodic));
  const DenseTensor r = center(ts::random_tensor(op.shape()));
  for (const char* spec : {"none", "jacobi:p=2,omega=1.15", "lowrank:r=2", "pinv"}) {
    const auto m = make_preconditioner(op, parse_preconditioner(spec));
    EXPECT_EQ(m->describe(), spec);
    EXPECT_EQ(m->apply(r).shape(), op.shape());
  }
  EXPECT_EQ(make_preconditioner(op, parse_preconditioner("none"))->apply(r), r);
}
