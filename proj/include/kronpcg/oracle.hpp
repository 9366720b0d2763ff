#pragma once

// Dense reference constructions. These materialize the full Kronecker
// matrices and exist for verification only; no solver path calls them.

#include <vector>

#include "kronpcg/poisson_operator.hpp"
#include "kronpcg/tensor.hpp"

namespace kronpcg::oracle {

/// Largest total size assemble_dense accepts.
inline constexpr std::size_t kMaxAssembledSize = 10000;

/// factors[0] (x) factors[1] (x) ... in written order, so {B, A} gives B (x) A
/// with blocks b_ij * A.
DenseMatrix kron_assemble(const std::vector<DenseMatrix>& factors);

/// (I (x) L_n) + (L_q (x) I) in 2D; the three-term sum in 3D.
DenseMatrix assemble_dense(const PoissonOperator& op);

}  // namespace kronpcg::oracle
