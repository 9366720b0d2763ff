#pragma once

// Dense 2-way / 3-way grid tensors and the small multilinear algebra the
// solver is written in. Storage is first-index-fastest, so the flat buffer of
// a tensor *is* its vectorization: element (i, j, k) of an n x q x t tensor
// lives at i + n*j + n*q*k.

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kronpcg {

/// Elementary-operation tally. Each scalar multiply or add counts as one.
struct OpCounter {
  std::uint64_t ops = 0;

  void add(std::uint64_t n) noexcept { ops += n; }
};

inline void count(OpCounter* counter, std::uint64_t n) noexcept {
  if (counter != nullptr) counter->add(n);
}

/// Extents of a 2D (n, q) or 3D (n, q, t) grid.
class Shape {
 public:
  Shape() = default;
  Shape(std::initializer_list<std::size_t> dims);
  explicit Shape(std::span<const std::size_t> dims);

  [[nodiscard]] std::size_t ndim() const noexcept { return ndim_; }
  [[nodiscard]] std::size_t operator[](std::size_t mode) const;
  /// Total number of cells, n*q[*t].
  [[nodiscard]] std::size_t size() const noexcept;
  [[nodiscard]] std::span<const std::size_t> dims() const noexcept { return {dims_.data(), ndim_}; }
  /// "50x100" / "128x64x8".
  [[nodiscard]] std::string str() const;

  friend bool operator==(const Shape& a, const Shape& b) noexcept {
    return a.ndim_ == b.ndim_ && a.dims_ == b.dims_;
  }

 private:
  std::array<std::size_t, 3> dims_{1, 1, 1};
  std::size_t ndim_ = 0;
};

/// Parses "50x100" or "128x64x8".
Shape parse_shape(const std::string& text);

/// Small dense column-major matrix. Used for per-direction factors
/// (eigenbases, splitting parts, low-rank factors) and for test oracles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static DenseMatrix identity(std::size_t n);
  /// Row-major literal, convenient for tests: from_rows({{1, 2}, {3, 4}}).
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i + rows_ * j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i + rows_ * j]; }
  [[nodiscard]] std::span<double> data() noexcept { return data_; }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  [[nodiscard]] DenseMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x);

class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(const Shape& shape, double fill = 0.0);
  DenseTensor(const Shape& shape, std::vector<double> data);

  [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] std::span<double> data() noexcept { return data_; }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  double& operator()(std::size_t i, std::size_t j, std::size_t k = 0) { return data_[index(i, j, k)]; }
  double operator()(std::size_t i, std::size_t j, std::size_t k = 0) const { return data_[index(i, j, k)]; }
  [[nodiscard]] std::size_t index(std::size_t i, std::size_t j, std::size_t k = 0) const noexcept {
    return i + shape_[0] * (j + shape_[1] * k);
  }

  friend bool operator==(const DenseTensor& a, const DenseTensor& b) noexcept {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// Flattening in inverse lexicographic order (zero-copy for this layout).
std::vector<double> vec(const DenseTensor& t);
DenseTensor unvec(std::span<const double> v, const Shape& shape);

/// m x_mode T: multiplies every mode-fibre of T by m. `mode` is 0-based
/// (0 = x / n, 1 = y / q, 2 = z / t). Counts 2*m.cols() ops per output entry.
DenseTensor mode_product(const DenseMatrix& m, std::size_t mode, const DenseTensor& t,
                         OpCounter* counter = nullptr);

/// (A, B[, C] | T) = A x_0 (B x_1 (C x_2 T)). In 2D this is A T B^T.
DenseTensor linear_transform(const DenseMatrix& a, const DenseMatrix& b, const std::optional<DenseMatrix>& c,
                             const DenseTensor& t, OpCounter* counter = nullptr);

double inner(const DenseTensor& x, const DenseTensor& y, OpCounter* counter = nullptr);
double frobenius_norm(const DenseTensor& x);
DenseTensor hadamard(const DenseTensor& x, const DenseTensor& y, OpCounter* counter = nullptr);

inline constexpr double kPinvThreshold = 1e-13;

/// Entrywise pseudoinverse: 1/x where |x| > tol, 0 otherwise.
DenseTensor hadamard_pinv(const DenseTensor& x, double tol = kPinvThreshold);

/// Returns y + a*x.
DenseTensor saxpy(double a, const DenseTensor& x, const DenseTensor& y, OpCounter* counter = nullptr);
/// y += a*x in place.
void axpy_inplace(double a, const DenseTensor& x, DenseTensor& y, OpCounter* counter = nullptr);

double sum(const DenseTensor& x);

void require_same_shape(const DenseTensor& x, const DenseTensor& y, const char* what);

}  // namespace kronpcg
