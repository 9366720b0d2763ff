#pragma once

// Independent dense references for the tests. Nothing here calls the
// library's own assembly or spectral code.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "kronpcg/laplace1d.hpp"
#include "kronpcg/tensor.hpp"

namespace testing_support {

using kronpcg::BoundaryCondition;
using kronpcg::DenseTensor;
using kronpcg::Shape;

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(12345);
  return engine;
}

inline double uniform(double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline std::size_t uniform_int(std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng());
}

inline BoundaryCondition random_bc() { return kronpcg::kAllBoundaryConditions[uniform_int(0, 4)]; }

inline DenseTensor random_tensor(const Shape& s) {
  DenseTensor t(s);
  for (double& v : t.data()) v = uniform();
  return t;
}

inline Eigen::VectorXd to_eigen(const DenseTensor& t) {
  return Eigen::Map<const Eigen::VectorXd>(t.data().data(), Eigen::Index(t.size()));
}

inline DenseTensor from_eigen(const Eigen::VectorXd& v, const Shape& s) {
  return DenseTensor(s, std::vector<double>(v.data(), v.data() + v.size()));
}

inline Eigen::MatrixXd to_eigen(const kronpcg::DenseMatrix& m) {
  return Eigen::Map<const Eigen::MatrixXd>(m.data().data(), Eigen::Index(m.rows()), Eigen::Index(m.cols()));
}

// 1D minus-Laplacian written out from the corner table.
inline Eigen::MatrixXd laplacian_1d(std::size_t n, BoundaryCondition bc) {
  double a = 2, b = 2, g = 0;
  switch (bc) {
    case BoundaryCondition::Periodic: g = -1; break;
    case BoundaryCondition::Dirichlet: break;
    case BoundaryCondition::Neumann: a = 1; b = 1; break;
    case BoundaryCondition::DirichletNeumann: b = 1; break;
    case BoundaryCondition::NeumannDirichlet: a = 1; break;
  }
  const auto N = Eigen::Index(n);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    l(i, i) = 2;
    if (i > 0) l(i, i - 1) = -1;
    if (i + 1 < N) l(i, i + 1) = -1;
  }
  l(0, 0) = a;
  l(N - 1, N - 1) = b;
  l(0, N - 1) += g;
  l(N - 1, 0) += g;
  return l;
}

// Full matrix of the Kronecker-sum operator in vec (first index fastest) order.
inline Eigen::MatrixXd assembled(const Shape& s, const std::vector<BoundaryCondition>& bcs) {
  std::vector<Eigen::MatrixXd> l;
  for (std::size_t m = 0; m < s.ndim(); ++m) l.push_back(laplacian_1d(s[m], bcs[m]));
  auto eye = [](std::size_t n) { return Eigen::MatrixXd::Identity(Eigen::Index(n), Eigen::Index(n)); };
  if (s.ndim() == 2) {
    return Eigen::kroneckerProduct(eye(s[1]), l[0]).eval() + Eigen::kroneckerProduct(l[1], eye(s[0])).eval();
  }
  // I_t (x) I_q (x) L_n + I_t (x) L_q (x) I_n + L_t (x) I_q (x) I_n
  return Eigen::kroneckerProduct(eye(s[2] * s[1]), l[0]).eval() +
         Eigen::kroneckerProduct(eye(s[2]), Eigen::kroneckerProduct(l[1], eye(s[0])).eval()).eval() +
         Eigen::kroneckerProduct(l[2], eye(s[1] * s[0])).eval();
}

// Moore-Penrose pseudoinverse through a symmetric eigendecomposition.
inline Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& a, double tol = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  Eigen::VectorXd inv = es.eigenvalues();
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = std::abs(inv(i)) > tol ? 1.0 / inv(i) : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

// Textbook preconditioned CG on dense matrices, recording alpha and beta.
struct DenseCgTrace {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<Eigen::VectorXd> iterates;  // iterates[0] = x0
};

inline DenseCgTrace dense_cg(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, std::size_t iters,
                             const Eigen::MatrixXd* m = nullptr) {
  DenseCgTrace t;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd r = b - a * x;
  Eigen::VectorXd z = m ? Eigen::VectorXd(*m * r) : r;
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  t.iterates.push_back(x);
  for (std::size_t s = 0; s < iters; ++s) {
    const Eigen::VectorXd ap = a * p;
    const double alpha = rz / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    z = m ? Eigen::VectorXd(*m * r) : r;
    const double rz_new = r.dot(z);
    const double beta = rz_new / rz;
    p = z + beta * p;
    rz = rz_new;
    t.alpha.push_back(alpha);
    t.beta.push_back(beta);
    t.iterates.push_back(x);
  }
  return t;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing_support
