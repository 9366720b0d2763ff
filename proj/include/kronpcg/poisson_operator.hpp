#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "kronpcg/laplace1d.hpp"
#include "kronpcg/tensor.hpp"

namespace kronpcg {

/// Kronecker-sum minus-Laplacian  L_n x_0 U + L_q x_1 U [+ L_t x_2 U].
/// Never materialized; applied through the per-direction stencils.
class PoissonOperator {
 public:
  explicit PoissonOperator(std::vector<Laplacian1D> factors);
  PoissonOperator(const Shape& shape, std::span<const BoundaryCondition> bcs);

  [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
  [[nodiscard]] std::size_t ndim() const noexcept { return factors_.size(); }
  [[nodiscard]] const Laplacian1D& factor(std::size_t mode) const { return factors_.at(mode); }
  [[nodiscard]] const std::vector<Laplacian1D>& factors() const noexcept { return factors_; }
  [[nodiscard]] std::vector<BoundaryCondition> bcs() const;

  /// Sparse application; 6 counted operations per entry per direction.
  [[nodiscard]] DenseTensor apply(const DenseTensor& x, OpCounter* counter = nullptr) const;

  /// Same product through dense mode products with the full 1D matrices.
  /// Counts 2*extent operations per entry per direction (accumulation included).
  [[nodiscard]] DenseTensor apply_full(const DenseTensor& x, OpCounter* counter = nullptr) const;

  /// Singular iff every factor is singular (periodic or Neumann everywhere).
  [[nodiscard]] bool is_singular() const noexcept;

 private:
  std::vector<Laplacian1D> factors_;
  Shape shape_;
};

enum class SpectrumSource { Numeric, Analytic };

/// Per-factor spectral decompositions in mode order.
std::vector<SpectralDecomposition> factor_spectra(const PoissonOperator& op, SpectrumSource source);

/// S(i,j[,k]) = lambda_i(L_n) + lambda_j(L_q) [+ lambda_k(L_t)], ascending per factor.
DenseTensor spectrum_sums(const std::vector<SpectralDecomposition>& spectra);
DenseTensor spectrum_sums(const PoissonOperator& op, SpectrumSource source = SpectrumSource::Numeric);

/// X minus its global mean. Counts 3 operations per entry.
DenseTensor center(const DenseTensor& x, OpCounter* counter = nullptr);
void center_inplace(DenseTensor& x, OpCounter* counter = nullptr);

/// Norm of the projection of vec(X) onto the constant vector: |sum X| / sqrt(cells).
double nullspace_component(const DenseTensor& x);

enum class FaceKind {
  Potential,  ///< Dirichlet value u_B / u_E.
  Field,      ///< Neumann value e_B / e_E.
};

struct FaceValue {
  FaceKind kind;
  double value;
};

struct DirectionBoundary {
  std::optional<FaceValue> begin;
  std::optional<FaceValue> end;
};

/// Prescribed boundary values, constant over each face.
struct BoundaryData {
  std::array<DirectionBoundary, 3> directions{};

  [[nodiscard]] bool empty() const noexcept;
};

/// Checks that every declared face matches the BC of its direction.
void validate_boundary_data(const PoissonOperator& op, const BoundaryData& bd);

/// Adds each declared face value to the first (begin) or last (end) slice
/// perpendicular to its direction.
DenseTensor apply_bc_updates(const PoissonOperator& op, const DenseTensor& h, const BoundaryData& bd);

}  // namespace kronpcg
