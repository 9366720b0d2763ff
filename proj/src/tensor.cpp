#include "kronpcg/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "kronpcg/error.hpp"

namespace kronpcg {

namespace {

using ConstMap = Eigen::Map<const Eigen::MatrixXd>;
using MutMap = Eigen::Map<Eigen::MatrixXd>;

ConstMap as_eigen(const DenseMatrix& m) { return {m.data().data(), Eigen::Index(m.rows()), Eigen::Index(m.cols())}; }

}  // namespace

Shape::Shape(std::initializer_list<std::size_t> dims) : Shape(std::span<const std::size_t>(dims.begin(), dims.size())) {}

Shape::Shape(std::span<const std::size_t> dims) {
  if (dims.size() != 2 && dims.size() != 3) {
    fail(ErrorCode::InvalidArgument, "shape must have 2 or 3 dimensions, got " + std::to_string(dims.size()));
  }
  for (std::size_t d : dims) {
    if (d == 0) fail(ErrorCode::InvalidArgument, "shape dimensions must be positive");
  }
  std::copy(dims.begin(), dims.end(), dims_.begin());
  ndim_ = dims.size();
}

std::size_t Shape::operator[](std::size_t mode) const {
  // Modes past ndim behave as singleton extents so 2D tensors index like n x q x 1.
  return mode < 3 ? dims_[mode] : 1;
}

std::size_t Shape::size() const noexcept {
  if (ndim_ == 0) return 0;
  return dims_[0] * dims_[1] * dims_[2];
}

std::string Shape::str() const {
  std::ostringstream os;
  for (std::size_t m = 0; m < ndim_; ++m) {
    if (m > 0) os << 'x';
    os << dims_[m];
  }
  return os.str();
}

Shape parse_shape(const std::string& text) {
  std::vector<std::size_t> dims;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find('x', pos), text.size());
    const std::string part = text.substr(pos, next - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      fail(ErrorCode::InvalidArgument, "malformed shape '" + text + "' (expected e.g. 50x100)");
    }
    dims.push_back(std::stoul(part));
    pos = next + 1;
  }
  return Shape{std::span<const std::size_t>(dims)};
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  DenseMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) fail(ErrorCode::InvalidArgument, "ragged matrix literal");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::ShapeMismatch, "matmul: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  MutMap(c.data().data(), Eigen::Index(c.rows()), Eigen::Index(c.cols())).noalias() = as_eigen(a) * as_eigen(b);
  return c;
}

std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) fail(ErrorCode::ShapeMismatch, "matvec: dimension mismatch");
  std::vector<double> y(a.rows(), 0.0);
  Eigen::Map<Eigen::VectorXd>(y.data(), Eigen::Index(y.size())).noalias() =
      as_eigen(a) * Eigen::Map<const Eigen::VectorXd>(x.data(), Eigen::Index(x.size()));
  return y;
}

DenseTensor::DenseTensor(const Shape& shape, double fill) : shape_(shape), data_(shape.size(), fill) {}

DenseTensor::DenseTensor(const Shape& shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
  if (data_.size() != shape_.size()) {
    fail(ErrorCode::ShapeMismatch, "tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                                       shape_.str());
  }
}

std::vector<double> vec(const DenseTensor& t) { return {t.data().begin(), t.data().end()}; }

DenseTensor unvec(std::span<const double> v, const Shape& shape) {
  return DenseTensor(shape, std::vector<double>(v.begin(), v.end()));
}

void require_same_shape(const DenseTensor& x, const DenseTensor& y, const char* what) {
  if (!(x.shape() == y.shape())) {
    fail(ErrorCode::ShapeMismatch,
         std::string(what) + ": shape mismatch " + x.shape().str() + " vs " + y.shape().str());
  }
}

DenseTensor mode_product(const DenseMatrix& m, std::size_t mode, const DenseTensor& t, OpCounter* counter) {
  const Shape& s = t.shape();
  if (mode >= s.ndim()) {
    fail(ErrorCode::ShapeMismatch, "mode " + std::to_string(mode) + " out of range for " + s.str());
  }
  if (m.cols() != s[mode]) {
    fail(ErrorCode::ShapeMismatch, "mode product: matrix has " + std::to_string(m.cols()) +
                                       " columns but mode extent is " + std::to_string(s[mode]));
  }
  std::array<std::size_t, 3> out_dims{s[0], s[1], s[2]};
  out_dims[mode] = m.rows();
  const Shape out_shape(std::span<const std::size_t>(out_dims.data(), s.ndim()));
  DenseTensor out(out_shape);

  const auto mat = as_eigen(m);
  const auto rows = Eigen::Index(m.rows());
  const auto inner_dim = Eigen::Index(m.cols());
  const double* in = t.data().data();
  double* res = out.data().data();

  if (mode == 0) {
    // Fibres are the columns of an n x (q t) matrix.
    const auto ncols = Eigen::Index(s[1] * s[2]);
    MutMap(res, rows, ncols).noalias() = mat * ConstMap(in, inner_dim, ncols);
  } else if (mode == 1) {
    // Each frontal slice is n x q; multiply from the right by m^T.
    const auto n = Eigen::Index(s[0]);
    for (std::size_t k = 0; k < s[2]; ++k) {
      MutMap(res + k * s[0] * m.rows(), n, rows).noalias() =
          ConstMap(in + k * s[0] * s[1], n, inner_dim) * mat.transpose();
    }
  } else {
    // (n q) x t matrix times m^T.
    const auto nq = Eigen::Index(s[0] * s[1]);
    MutMap(res, nq, rows).noalias() = ConstMap(in, nq, inner_dim) * mat.transpose();
  }
  count(counter, 2 * m.cols() * out.size());
  return out;
}

DenseTensor linear_transform(const DenseMatrix& a, const DenseMatrix& b, const std::optional<DenseMatrix>& c,
                             const DenseTensor& t, OpCounter* counter) {
  const std::size_t nd = t.shape().ndim();
  if (nd == 3 && !c) fail(ErrorCode::InvalidArgument, "linear_transform: 3D tensor needs a third-mode matrix");
  if (nd == 2 && c) fail(ErrorCode::InvalidArgument, "linear_transform: 2D tensor takes only two matrices");
  DenseTensor r = c ? mode_product(*c, 2, t, counter) : t;
  r = mode_product(b, 1, r, counter);
  return mode_product(a, 0, r, counter);
}

double inner(const DenseTensor& x, const DenseTensor& y, OpCounter* counter) {
  require_same_shape(x, y, "inner");
  const auto xs = x.data();
  const auto ys = y.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) acc += xs[i] * ys[i];
  count(counter, 2 * xs.size());
  return acc;
}

// Compensated sum of exact squares, so the result is correctly rounded in
// practice; normalization relies on that.
double frobenius_norm(const DenseTensor& x) {
  double s = 0.0;
  double c = 0.0;
  for (double v : x.data()) {
    const double p = v * v;
    const double e = std::fma(v, v, -p);
    const double t = s + p;
    c += std::abs(s) >= p ? (s - t) + p : (p - t) + s;
    c += e;
    s = t;
  }
  return std::sqrt(s + c);
}

DenseTensor hadamard(const DenseTensor& x, const DenseTensor& y, OpCounter* counter) {
  require_same_shape(x, y, "hadamard");
  DenseTensor out(x.shape());
  std::transform(x.data().begin(), x.data().end(), y.data().begin(), out.data().begin(), std::multiplies<>());
  count(counter, x.size());
  return out;
}

DenseTensor hadamard_pinv(const DenseTensor& x, double tol) {
  if (!(tol >= 0.0)) fail(ErrorCode::InvalidArgument, "hadamard_pinv: tolerance must be nonnegative");
  DenseTensor out(x.shape());
  std::transform(x.data().begin(), x.data().end(), out.data().begin(),
                 [tol](double v) { return std::abs(v) > tol ? 1.0 / v : 0.0; });
  return out;
}

DenseTensor saxpy(double a, const DenseTensor& x, const DenseTensor& y, OpCounter* counter) {
  DenseTensor out = y;
  axpy_inplace(a, x, out, counter);
  return out;
}

void axpy_inplace(double a, const DenseTensor& x, DenseTensor& y, OpCounter* counter) {
  require_same_shape(x, y, "saxpy");
  const auto xs = x.data();
  auto ys = y.data();
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] += a * xs[i];
  count(counter, 2 * xs.size());
}

double sum(const DenseTensor& x) { return std::accumulate(x.data().begin(), x.data().end(), 0.0); }

}  // namespace kronpcg
