#include "kronpcg/laplace1d.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "kronpcg/error.hpp"

namespace kronpcg {

CornerTriple corner_triple(BoundaryCondition bc) noexcept {
  switch (bc) {
    case BoundaryCondition::Periodic: return {2.0, 2.0, -1.0};
    case BoundaryCondition::Dirichlet: return {2.0, 2.0, 0.0};
    case BoundaryCondition::Neumann: return {1.0, 1.0, 0.0};
    case BoundaryCondition::DirichletNeumann: return {2.0, 1.0, 0.0};
    case BoundaryCondition::NeumannDirichlet: return {1.0, 2.0, 0.0};
  }
  return {2.0, 2.0, 0.0};
}

std::string to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::Periodic: return "periodic";
    case BoundaryCondition::Dirichlet: return "dirichlet";
    case BoundaryCondition::Neumann: return "neumann";
    case BoundaryCondition::DirichletNeumann: return "dirichlet-neumann";
    case BoundaryCondition::NeumannDirichlet: return "neumann-dirichlet";
  }
  return "unknown";
}

BoundaryCondition parse_boundary_condition(const std::string& name) {
  for (BoundaryCondition bc : kAllBoundaryConditions) {
    if (to_string(bc) == name) return bc;
  }
  fail(ErrorCode::InvalidArgument, "unknown boundary condition '" + name + "'");
}

bool is_singular_1d(BoundaryCondition bc) noexcept {
  return bc == BoundaryCondition::Periodic || bc == BoundaryCondition::Neumann;
}

DenseMatrix TriStencil::dense() const {
  const std::size_t n = rows.size();
  DenseMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t e = 0; e < 3; ++e) m(r, rows[r].col[e]) += rows[r].val[e];
  }
  return m;
}

void accumulate_mode_stencil(const TriStencil& s, std::size_t mode, const DenseTensor& x, DenseTensor& out,
                             OpCounter* counter) {
  require_same_shape(x, out, "accumulate_mode_stencil");
  const Shape& sh = x.shape();
  if (mode >= sh.ndim() || s.size() != sh[mode]) {
    fail(ErrorCode::ShapeMismatch, "stencil of size " + std::to_string(s.size()) + " does not fit mode " +
                                       std::to_string(mode) + " of " + sh.str());
  }
  const std::size_t n = sh[0];
  const std::size_t q = sh[1];
  const std::size_t t = sh[2];
  const double* in = x.data().data();
  double* res = out.data().data();

  if (mode == 0) {
    for (std::size_t f = 0; f < q * t; ++f) {
      const double* xf = in + f * n;
      double* of = res + f * n;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& row = s.rows[i];
        of[i] += row.val[0] * xf[row.col[0]] + row.val[1] * xf[row.col[1]] + row.val[2] * xf[row.col[2]];
      }
    }
  } else {
    // Modes 1 and 2: whole contiguous blocks of length `stride` move together.
    const std::size_t stride = mode == 1 ? n : n * q;
    const std::size_t extent = mode == 1 ? q : t;
    const std::size_t outer = mode == 1 ? t : 1;
    for (std::size_t k = 0; k < outer; ++k) {
      const double* xb = in + k * n * q;
      double* ob = res + k * n * q;
      for (std::size_t r = 0; r < extent; ++r) {
        const auto& row = s.rows[r];
        const double* x0 = xb + row.col[0] * stride;
        const double* x1 = xb + row.col[1] * stride;
        const double* x2 = xb + row.col[2] * stride;
        double* o = ob + r * stride;
        for (std::size_t i = 0; i < stride; ++i) {
          o[i] += row.val[0] * x0[i] + row.val[1] * x1[i] + row.val[2] * x2[i];
        }
      }
    }
  }
  count(counter, 6 * x.size());
}

Laplacian1D::Laplacian1D(std::size_t n, BoundaryCondition bc) : n_(n), bc_(bc) {
  if (n < 3) fail(ErrorCode::InvalidArgument, "1D Laplacian needs n >= 3, got " + std::to_string(n));
  const CornerTriple c = corner_triple(bc);
  stencil_.rows.resize(n);
  stencil_.rows[0] = {{n - 1, 0, 1}, {c.gamma, c.alpha, -1.0}};
  for (std::size_t r = 1; r + 1 < n; ++r) stencil_.rows[r] = {{r - 1, r, r + 1}, {-1.0, 2.0, -1.0}};
  stencil_.rows[n - 1] = {{n - 2, n - 1, 0}, {-1.0, c.beta, c.gamma}};
}

double Laplacian1D::diagonal(std::size_t i) const {
  if (i >= n_) fail(ErrorCode::InvalidArgument, "diagonal index out of range");
  return stencil_.rows[i].val[1];
}

std::vector<double> Laplacian1D::apply(std::span<const double> x) const {
  if (x.size() != n_) {
    fail(ErrorCode::ShapeMismatch,
         "apply_1d: vector length " + std::to_string(x.size()) + " != " + std::to_string(n_));
  }
  std::vector<double> y(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    const auto& row = stencil_.rows[r];
    y[r] = row.val[0] * x[row.col[0]] + row.val[1] * x[row.col[1]] + row.val[2] * x[row.col[2]];
  }
  return y;
}

namespace {

using std::numbers::pi;

void normalize_column(DenseMatrix& v, std::size_t col) {
  double norm2 = 0.0;
  for (std::size_t i = 0; i < v.rows(); ++i) norm2 += v(i, col) * v(i, col);
  const double inv = 1.0 / std::sqrt(norm2);
  for (std::size_t i = 0; i < v.rows(); ++i) v(i, col) *= inv;
}

// Removes the component of column b along (already unit) column a, then normalizes b.
void orthonormalize_against(DenseMatrix& v, std::size_t a, std::size_t b) {
  double proj = 0.0;
  for (std::size_t i = 0; i < v.rows(); ++i) proj += v(i, a) * v(i, b);
  for (std::size_t i = 0; i < v.rows(); ++i) v(i, b) -= proj * v(i, a);
  normalize_column(v, b);
}

SpectralDecomposition sorted(std::vector<double> lambda, const DenseMatrix& v) {
  std::vector<std::size_t> order(lambda.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lambda[a] < lambda[b]; });
  SpectralDecomposition out{std::vector<double>(lambda.size()), DenseMatrix(v.rows(), v.cols())};
  for (std::size_t c = 0; c < order.size(); ++c) {
    out.eigenvalues[c] = lambda[order[c]];
    for (std::size_t i = 0; i < v.rows(); ++i) out.vectors(i, c) = v(i, order[c]);
  }
  return out;
}

}  // namespace

DenseMatrix mixed_bc_raw_eigenvectors(std::size_t n, BoundaryCondition bc) {
  if (bc != BoundaryCondition::DirichletNeumann && bc != BoundaryCondition::NeumannDirichlet) {
    fail(ErrorCode::InvalidArgument, "mixed_bc_raw_eigenvectors: BC must be mixed");
  }
  DenseMatrix v(n, n);
  const double denom = 2.0 * double(n) + 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double theta = (2.0 * double(k) - 1.0) * pi / denom;
    for (std::size_t j = 1; j <= n; ++j) {
      v(j - 1, k - 1) = bc == BoundaryCondition::DirichletNeumann
                            ? std::sin(double(j) * theta - double(k) * pi)
                            : std::cos(double(j) * theta - theta / 2.0);
    }
  }
  return v;
}

SpectralDecomposition analytic_spectrum(std::size_t n, BoundaryCondition bc) {
  if (n < 3) fail(ErrorCode::InvalidArgument, "analytic_spectrum needs n >= 3");
  const double nd = double(n);
  std::vector<double> lambda(n);
  DenseMatrix v(n, n);

  switch (bc) {
    case BoundaryCondition::Periodic: {
      // 0 with the constant vector, then cos/sin pairs, then 4 with the
      // alternating vector when n is even.
      for (std::size_t j = 0; j < n; ++j) v(j, 0) = 1.0;
      lambda[0] = 0.0;
      normalize_column(v, 0);
      const std::size_t pairs = (n - 1) / 2;
      for (std::size_t k = 1; k <= pairs; ++k) {
        const double arg = 2.0 * double(k) * pi / nd;
        const std::size_t c = 2 * k - 1;
        lambda[c] = lambda[c + 1] = 2.0 - 2.0 * std::cos(arg);
        for (std::size_t j = 1; j <= n; ++j) {
          v(j - 1, c) = std::cos(double(j) * arg);
          v(j - 1, c + 1) = std::sin(double(j) * arg);
        }
        normalize_column(v, c);
        orthonormalize_against(v, c, c + 1);
      }
      if (n % 2 == 0) {
        lambda[n - 1] = 4.0;
        for (std::size_t j = 0; j < n; ++j) v(j, n - 1) = j % 2 == 0 ? 1.0 : -1.0;
        normalize_column(v, n - 1);
      }
      break;
    }
    case BoundaryCondition::Dirichlet:
      for (std::size_t k = 1; k <= n; ++k) {
        lambda[k - 1] = 2.0 - 2.0 * std::cos(double(k) * pi / (nd + 1.0));
        for (std::size_t j = 1; j <= n; ++j) v(j - 1, k - 1) = std::sin(double(j * k) * pi / (nd + 1.0));
        normalize_column(v, k - 1);
      }
      break;
    case BoundaryCondition::Neumann:
      for (std::size_t k = 1; k <= n; ++k) {
        lambda[k - 1] = 2.0 - 2.0 * std::cos(double(k - 1) * pi / nd);
        for (std::size_t j = 1; j <= n; ++j) {
          v(j - 1, k - 1) = std::cos((double(j) - 0.5) * double(k - 1) * pi / nd);
        }
        normalize_column(v, k - 1);
      }
      break;
    case BoundaryCondition::DirichletNeumann:
    case BoundaryCondition::NeumannDirichlet:
      v = mixed_bc_raw_eigenvectors(n, bc);
      for (std::size_t k = 1; k <= n; ++k) {
        lambda[k - 1] = 2.0 - 2.0 * std::cos((2.0 * double(k) - 1.0) * pi / (2.0 * nd + 1.0));
        normalize_column(v, k - 1);
      }
      break;
  }
  return sorted(std::move(lambda), v);
}

SpectralDecomposition numeric_spectrum(const Laplacian1D& l) {
  const DenseMatrix a = l.dense();
  const auto n = Eigen::Index(l.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Eigen::Map<const Eigen::MatrixXd>(a.data().data(), n, n));
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::Numerical, "symmetric eigensolver failed for n=" + std::to_string(l.size()));
  }
  SpectralDecomposition out{std::vector<double>(l.size()), DenseMatrix(l.size(), l.size())};
  Eigen::Map<Eigen::VectorXd>(out.eigenvalues.data(), n) = solver.eigenvalues();
  Eigen::Map<Eigen::MatrixXd>(out.vectors.data().data(), n, n) = solver.eigenvectors();
  return out;
}

}  // namespace kronpcg
