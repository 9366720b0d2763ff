#include "kronpcg/oracle.hpp"

#include "kronpcg/error.hpp"

namespace kronpcg::oracle {

namespace {

DenseMatrix kron2(const DenseMatrix& b, const DenseMatrix& a) {
  DenseMatrix out(b.rows() * a.rows(), b.cols() * a.cols());
  for (std::size_t bj = 0; bj < b.cols(); ++bj)
    for (std::size_t bi = 0; bi < b.rows(); ++bi) {
      const double s = b(bi, bj);
      if (s == 0.0) continue;
      for (std::size_t aj = 0; aj < a.cols(); ++aj)
        for (std::size_t ai = 0; ai < a.rows(); ++ai) out(bi * a.rows() + ai, bj * a.cols() + aj) = s * a(ai, aj);
    }
  return out;
}

DenseMatrix add(const DenseMatrix& x, const DenseMatrix& y) {
  DenseMatrix out = x;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += y.data()[i];
  return out;
}

}  // namespace

DenseMatrix kron_assemble(const std::vector<DenseMatrix>& factors) {
  if (factors.empty()) fail(ErrorCode::InvalidArgument, "kron_assemble: no factors");
  DenseMatrix acc = factors.back();
  for (std::size_t f = factors.size() - 1; f-- > 0;) acc = kron2(factors[f], acc);
  return acc;
}

DenseMatrix assemble_dense(const PoissonOperator& op) {
  const Shape& s = op.shape();
  if (s.size() > kMaxAssembledSize) {
    fail(ErrorCode::InvalidArgument, "assemble_dense: " + s.str() + " exceeds the dense oracle size limit");
  }
  std::vector<DenseMatrix> eye;
  for (std::size_t m = 0; m < op.ndim(); ++m) eye.push_back(DenseMatrix::identity(s[m]));

  DenseMatrix total(s.size(), s.size());
  for (std::size_t m = 0; m < op.ndim(); ++m) {
    // Written order is reversed mode order: mode 0 is the rightmost factor.
    std::vector<DenseMatrix> term;
    for (std::size_t f = op.ndim(); f-- > 0;) term.push_back(f == m ? op.factor(m).dense() : eye[f]);
    total = add(total, kron_assemble(term));
  }
  return total;
}

}  // namespace kronpcg::oracle
