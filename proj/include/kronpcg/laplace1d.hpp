#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kronpcg/tensor.hpp"

namespace kronpcg {

enum class BoundaryCondition {
  Periodic,
  Dirichlet,
  Neumann,
  DirichletNeumann,  ///< Dirichlet at the beginning, Neumann at the end.
  NeumannDirichlet,  ///< Neumann at the beginning, Dirichlet at the end.
};

inline constexpr std::array<BoundaryCondition, 5> kAllBoundaryConditions{
    BoundaryCondition::Periodic, BoundaryCondition::Dirichlet, BoundaryCondition::Neumann,
    BoundaryCondition::DirichletNeumann, BoundaryCondition::NeumannDirichlet};

/// Corner values of the 1D stencil: (1,1) = alpha, (n,n) = beta, (1,n) = (n,1) = gamma.
struct CornerTriple {
  double alpha;
  double beta;
  double gamma;
};

CornerTriple corner_triple(BoundaryCondition bc) noexcept;

/// "periodic", "dirichlet", "neumann", "dirichlet-neumann", "neumann-dirichlet".
std::string to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(const std::string& name);

/// True for the BCs whose 1D Laplacian has a zero eigenvalue.
bool is_singular_1d(BoundaryCondition bc) noexcept;

/// n x n matrix with exactly three stored entries per row (column indices
/// distinct since n >= 3; non-periodic corners store an explicit zero).
struct TriStencil {
  struct Row {
    std::array<std::size_t, 3> col;
    std::array<double, 3> val;
  };
  std::vector<Row> rows;

  [[nodiscard]] std::size_t size() const noexcept { return rows.size(); }
  [[nodiscard]] DenseMatrix dense() const;
};

/// Accumulates (s x_mode x) into out: out += s x_mode x. Every output entry
/// costs 3 multiply-adds, i.e. 6 counted operations.
void accumulate_mode_stencil(const TriStencil& s, std::size_t mode, const DenseTensor& x, DenseTensor& out,
                             OpCounter* counter = nullptr);

/// Discrete 1D minus-Laplacian with BC-dependent corners.
class Laplacian1D {
 public:
  Laplacian1D(std::size_t n, BoundaryCondition bc);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] BoundaryCondition bc() const noexcept { return bc_; }
  [[nodiscard]] CornerTriple corners() const noexcept { return corner_triple(bc_); }
  [[nodiscard]] double diagonal(std::size_t i) const;
  [[nodiscard]] const TriStencil& stencil() const noexcept { return stencil_; }
  [[nodiscard]] DenseMatrix dense() const { return stencil_.dense(); }

  /// L x using the three stored entries per row.
  [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;

 private:
  std::size_t n_;
  BoundaryCondition bc_;
  TriStencil stencil_;
};

/// Eigenvalues ascending, unit-norm eigenvectors as the columns of `vectors`.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  DenseMatrix vectors;
};

/// Closed-form eigenpairs, normalized and sorted ascending. Periodic
/// cosine/sine pairs are orthonormalized within their shared eigenspace; for
/// odd n the periodic spectrum has no eigenvalue 4.
SpectralDecomposition analytic_spectrum(std::size_t n, BoundaryCondition bc);

/// Closed-form eigenvectors of the two mixed BCs before normalization and
/// sorting, exposed so the reindexing relation between them can be checked.
DenseMatrix mixed_bc_raw_eigenvectors(std::size_t n, BoundaryCondition bc);

/// Dense symmetric eigensolver; the default eigen-source for preconditioners.
SpectralDecomposition numeric_spectrum(const Laplacian1D& l);

}  // namespace kronpcg
