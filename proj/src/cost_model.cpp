#include "kronpcg/cost_model.hpp"

namespace kronpcg {

std::uint64_t cost_model(const Shape& shape, CostPhase phase, ApplyVariant variant) {
  const std::uint64_t cells = shape.size();
  std::uint64_t dim_sum = 0;
  for (std::size_t d : shape.dims()) dim_sum += d;

  // Operator application: 6 ops per entry per direction (sparse) or
  // 2*extent per entry per direction (full).
  const std::uint64_t apply = variant == ApplyVariant::Sparse ? 6 * shape.ndim() * cells : 2 * cells * dim_sum;
  // Init: one saxpy (R_0) and one inner product (rho_0).
  // Iteration: two inner products and three saxpys.
  const std::uint64_t vector_work = phase == CostPhase::Init ? 4 * cells : 10 * cells;
  return apply + vector_work;
}

std::uint64_t pinv_apply_cost(const Shape& shape) {
  const std::uint64_t cells = shape.size();
  std::uint64_t dim_sum = 0;
  for (std::size_t d : shape.dims()) dim_sum += d;
  return 4 * cells * dim_sum + cells;
}

std::uint64_t centering_cost(const Shape& shape) { return 3 * std::uint64_t(shape.size()); }

}  // namespace kronpcg
