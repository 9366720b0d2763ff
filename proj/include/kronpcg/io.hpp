#pragma once

// Tensor files, boundary-data sidecars and JSON run logs.
//
// Tensor file: the ASCII line "KTEN <ndim> <d1> <d2> [<d3>]\n" followed by
// the entries in vec order as 64-bit little-endian IEEE-754 values.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kronpcg/laplace1d.hpp"
#include "kronpcg/pcg.hpp"
#include "kronpcg/poisson_operator.hpp"
#include "kronpcg/tensor.hpp"

namespace kronpcg {

std::string tensor_header(const Shape& shape);
std::string encode_tensor(const DenseTensor& t);
DenseTensor decode_tensor(const std::string& bytes);

void write_tensor(const std::string& path, const DenseTensor& t);
DenseTensor read_tensor(const std::string& path);

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// Boundary data as stored in a sidecar file. `applied` marks data whose face
/// updates are already contained in the accompanying right-hand side (scaled
/// by `scale`), as for generated problems.
struct BoundaryFile {
  BoundaryData data;
  bool applied = false;
  double scale = 1.0;
};

/// {"applied": false, "scale": 1, "x": {"begin": {"kind": "potential", "value": 0}, "end": {...}}, ...}
std::string boundary_to_json(const BoundaryFile& bf);
BoundaryFile boundary_from_json(const std::string& text);

struct RunInfo {
  std::string problem;
  Shape shape;
  std::vector<BoundaryCondition> bcs;
  std::string preconditioner;
  std::optional<std::uint64_t> seed;
  SolverConfig config;
};

/// One JSON document describing a solve; NaN entries are written as null.
std::string run_log_json(const RunInfo& info, const ConvergenceLog& log, const DenseTensor* solution = nullptr);

}  // namespace kronpcg
