#pragma once

// Test-problem generators. Every generated right-hand side is centered when
// the operator is singular and scaled so that ||H||_fro = 1 / (number of cells).

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kronpcg/laplace1d.hpp"
#include "kronpcg/poisson_operator.hpp"
#include "kronpcg/tensor.hpp"

namespace kronpcg {

struct ProblemSpec {
  std::string name;     ///< "p1", "p2" or "p3".
  std::string variant;  ///< Size tag, e.g. "50x100" or "3d_128x64x8".
  Shape shape;
  std::vector<BoundaryCondition> bcs;
  BoundaryData boundary;

  // Problem 1: charge lines where (i + slope*j) mod period is 0 (positive)
  // or period/2 (negative).
  std::size_t period = 0;
  std::size_t slope = 0;
  // Problem 2: x-rows [band_begin, band_end) carry unit charge.
  std::size_t band_begin = 0;
  std::size_t band_end = 0;
  // Problem 3: x-rows of the positive and negative stripes, and the RNG seed.
  std::size_t pos_begin = 0, pos_end = 0, neg_begin = 0, neg_end = 0;
  std::uint64_t seed = 0;

  /// Factor applied by normalize(); the physical solution is U / scale.
  double scale = 1.0;

  [[nodiscard]] PoissonOperator make_operator() const { return PoissonOperator(shape, bcs); }
};

struct Problem {
  ProblemSpec spec;
  DenseTensor h;
};

/// Scales H so its Frobenius norm is 1/cells. Throws on a zero tensor.
DenseTensor normalize(const DenseTensor& h, double* scale_out = nullptr);

/// Alternating diagonal charge lines on a doubly periodic n x q grid.
/// period = 0 selects q; slope = 0 selects 2.
Problem gen_problem1(std::size_t n, std::size_t q, std::size_t period = 0, std::size_t slope = 0);

/// 40 x 120 grid, x: Dirichlet (u = 0) at the start and field -0.5 at the end,
/// y: periodic; a unit-charge band of three rows at the first third of x.
Problem gen_problem2();

inline constexpr std::uint64_t kDefaultSeed = 20240607;

/// Random positive (wide) and negative (narrow) stripes, periodic everywhere.
/// Variants: 2d_512x256, 3d_128x64x8, 3d_128x64x64, 3d_512x256x8.
Problem gen_problem3(const std::string& variant, std::uint64_t seed = kDefaultSeed);

std::vector<std::string> problem3_variants();

/// Sizes used for problem 1 in the experiments: 5x10, 20x40, 50x100, 500x1000.
std::vector<Shape> problem1_sizes();

/// Fixed-seed 64-bit Mersenne twister with a portable uniform [0, 1) draw.
/// std::uniform_real_distribution is implementation-defined, so the draw is
/// built from the top 53 bits directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kronpcg
