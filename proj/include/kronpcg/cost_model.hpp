#pragma once

// Closed-form elementary-operation counts of the solver. Counting rules match
// the instrumented kernels: a scalar multiply or add is one operation, a
// stencil row is three multiply-adds, a dense mode product costs two
// operations per inner-dimension term, inner products and saxpys cost two
// per entry, Hadamard products one per entry, centering three per entry.
// Scalar work (alpha, beta, divisions) is not counted.

#include <cstdint>

#include "kronpcg/pcg.hpp"
#include "kronpcg/tensor.hpp"

namespace kronpcg {

enum class CostPhase { Init, Iter };

/// PCG work without the preconditioner: initialization (W_0, R_0, rho_0) or
/// one iteration.
std::uint64_t cost_model(const Shape& shape, CostPhase phase, ApplyVariant variant);

/// One application of the pseudoinverse preconditioner: 4N(sum of dims) + N.
std::uint64_t pinv_apply_cost(const Shape& shape);

/// One centering pass, 3N.
std::uint64_t centering_cost(const Shape& shape);

}  // namespace kronpcg
