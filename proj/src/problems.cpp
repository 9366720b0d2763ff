#include "kronpcg/problems.hpp"

#include <cmath>

#include "kronpcg/error.hpp"

namespace kronpcg {

DenseTensor normalize(const DenseTensor& h, double* scale_out) {
  const double norm = frobenius_norm(h);
  if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorCode::InvalidArgument, "cannot normalize a zero tensor");
  const double target = 1.0 / double(h.size());
  double scale = target / norm;
  DenseTensor out = h;
  for (double& v : out.data()) v *= scale;
  // One correction pass absorbs the rounding of the first scaling.
  const double fix = target / frobenius_norm(out);
  if (fix != 1.0) {
    for (double& v : out.data()) v *= fix;
    scale *= fix;
  }
  if (scale_out != nullptr) *scale_out = scale;
  return out;
}

Problem gen_problem1(std::size_t n, std::size_t q, std::size_t period, std::size_t slope) {
  if (n < 3 || q < 3) fail(ErrorCode::InvalidArgument, "problem 1 needs n, q >= 3");
  if (period == 0) period = q;
  if (slope == 0) slope = 2;
  if (period < 2 || period % 2 != 0) {
    fail(ErrorCode::InvalidArgument, "problem 1 stripe period must be even and >= 2, got " + std::to_string(period));
  }

  Problem p;
  ProblemSpec& spec = p.spec;
  spec.name = "p1";
  spec.shape = Shape{n, q};
  spec.variant = spec.shape.str();
  spec.bcs = {BoundaryCondition::Periodic, BoundaryCondition::Periodic};
  spec.period = period;
  spec.slope = slope;

  DenseTensor h(spec.shape);
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = (i + slope * j) % period;
      if (c == 0) h(i, j) = 1.0;
      else if (c == period / 2) h(i, j) = -1.0;
    }
  }
  center_inplace(h);
  p.h = normalize(h, &spec.scale);
  return p;
}

Problem gen_problem2() {
  constexpr std::size_t n = 40;
  constexpr std::size_t q = 120;

  Problem p;
  ProblemSpec& spec = p.spec;
  spec.name = "p2";
  spec.shape = Shape{n, q};
  spec.variant = spec.shape.str();
  spec.bcs = {BoundaryCondition::DirichletNeumann, BoundaryCondition::Periodic};
  spec.boundary.directions[0].begin = FaceValue{FaceKind::Potential, 0.0};
  spec.boundary.directions[0].end = FaceValue{FaceKind::Field, -0.5};
  spec.band_begin = n / 3 - 1;
  spec.band_end = spec.band_begin + 3;

  const PoissonOperator op = spec.make_operator();
  validate_boundary_data(op, spec.boundary);

  DenseTensor h(spec.shape);
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t i = spec.band_begin; i < spec.band_end; ++i) h(i, j) = 1.0;
  }
  p.h = normalize(apply_bc_updates(op, h, spec.boundary), &spec.scale);
  return p;
}

std::vector<std::string> problem3_variants() { return {"2d_512x256", "3d_128x64x8", "3d_128x64x64", "3d_512x256x8"}; }

std::vector<Shape> problem1_sizes() { return {Shape{5, 10}, Shape{20, 40}, Shape{50, 100}, Shape{500, 1000}}; }

Problem gen_problem3(const std::string& variant, std::uint64_t seed) {
  Shape shape;
  if (variant == "2d_512x256") shape = Shape{512, 256};
  else if (variant == "3d_128x64x8") shape = Shape{128, 64, 8};
  else if (variant == "3d_128x64x64") shape = Shape{128, 64, 64};
  else if (variant == "3d_512x256x8") shape = Shape{512, 256, 8};
  else fail(ErrorCode::InvalidArgument, "unknown problem 3 variant '" + variant + "'");

  Problem p;
  ProblemSpec& spec = p.spec;
  spec.name = "p3";
  spec.variant = variant;
  spec.shape = shape;
  spec.bcs.assign(shape.ndim(), BoundaryCondition::Periodic);
  spec.seed = seed;

  const std::size_t n = shape[0];
  const std::size_t pos_width = std::max<std::size_t>(1, n / 8);
  const std::size_t neg_width = std::max<std::size_t>(1, n / 16);
  spec.pos_begin = n / 4 - pos_width / 2;
  spec.pos_end = spec.pos_begin + pos_width;
  spec.neg_begin = 3 * n / 4 - neg_width / 2;
  spec.neg_end = spec.neg_begin + neg_width;

  DenseTensor h(shape);
  Rng rng(seed);
  double pos_sum = 0.0;
  double neg_sum = 0.0;
  // Draw order is the storage order, which fixes the stream for a seed.
  for (std::size_t k = 0; k < shape[2]; ++k) {
    for (std::size_t j = 0; j < shape[1]; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (i >= spec.pos_begin && i < spec.pos_end) {
          h(i, j, k) = rng.uniform();
          pos_sum += h(i, j, k);
        } else if (i >= spec.neg_begin && i < spec.neg_end) {
          h(i, j, k) = -rng.uniform();
          neg_sum += h(i, j, k);
        }
      }
    }
  }
  if (!(pos_sum > 0.0) || !(neg_sum < 0.0)) fail(ErrorCode::Numerical, "degenerate random stripes");
  const double factor = pos_sum / -neg_sum;
  for (std::size_t k = 0; k < shape[2]; ++k) {
    for (std::size_t j = 0; j < shape[1]; ++j) {
      for (std::size_t i = spec.neg_begin; i < spec.neg_end; ++i) h(i, j, k) *= factor;
    }
  }
  center_inplace(h);
  p.h = normalize(h, &spec.scale);
  return p;
}

}  // namespace kronpcg
