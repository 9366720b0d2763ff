#include "kronpcg/poisson_operator.hpp"

#include <algorithm>
#include <cmath>

#include "kronpcg/error.hpp"

namespace kronpcg {

namespace {

Shape shape_of(const std::vector<Laplacian1D>& factors) {
  std::vector<std::size_t> dims;
  for (const auto& f : factors) dims.push_back(f.size());
  return Shape{std::span<const std::size_t>(dims)};
}

std::vector<Laplacian1D> build_factors(const Shape& shape, std::span<const BoundaryCondition> bcs) {
  if (bcs.size() != shape.ndim()) {
    fail(ErrorCode::InvalidArgument, "need one boundary condition per direction (" + std::to_string(shape.ndim()) +
                                         "), got " + std::to_string(bcs.size()));
  }
  std::vector<Laplacian1D> factors;
  for (std::size_t m = 0; m < shape.ndim(); ++m) factors.emplace_back(shape[m], bcs[m]);
  return factors;
}

}  // namespace

PoissonOperator::PoissonOperator(std::vector<Laplacian1D> factors)
    : factors_(std::move(factors)), shape_(shape_of(factors_)) {}

PoissonOperator::PoissonOperator(const Shape& shape, std::span<const BoundaryCondition> bcs)
    : PoissonOperator(build_factors(shape, bcs)) {}

std::vector<BoundaryCondition> PoissonOperator::bcs() const {
  std::vector<BoundaryCondition> out;
  for (const auto& f : factors_) out.push_back(f.bc());
  return out;
}

DenseTensor PoissonOperator::apply(const DenseTensor& x, OpCounter* counter) const {
  if (!(x.shape() == shape_)) {
    fail(ErrorCode::ShapeMismatch, "operator of shape " + shape_.str() + " applied to " + x.shape().str());
  }
  DenseTensor w(shape_);
  for (std::size_t m = 0; m < factors_.size(); ++m) accumulate_mode_stencil(factors_[m].stencil(), m, x, w, counter);
  return w;
}

DenseTensor PoissonOperator::apply_full(const DenseTensor& x, OpCounter* counter) const {
  if (!(x.shape() == shape_)) {
    fail(ErrorCode::ShapeMismatch, "operator of shape " + shape_.str() + " applied to " + x.shape().str());
  }
  DenseTensor w(shape_);
  for (std::size_t m = 0; m < factors_.size(); ++m) {
    const DenseTensor term = mode_product(factors_[m].dense(), m, x, counter);
    axpy_inplace(1.0, term, w);
  }
  return w;
}

bool PoissonOperator::is_singular() const noexcept {
  return std::all_of(factors_.begin(), factors_.end(), [](const Laplacian1D& f) { return is_singular_1d(f.bc()); });
}

std::vector<SpectralDecomposition> factor_spectra(const PoissonOperator& op, SpectrumSource source) {
  std::vector<SpectralDecomposition> out;
  for (const auto& f : op.factors()) {
    out.push_back(source == SpectrumSource::Numeric ? numeric_spectrum(f) : analytic_spectrum(f.size(), f.bc()));
  }
  return out;
}

DenseTensor spectrum_sums(const std::vector<SpectralDecomposition>& spectra) {
  std::vector<std::size_t> dims;
  for (const auto& s : spectra) dims.push_back(s.eigenvalues.size());
  const Shape shape{std::span<const std::size_t>(dims)};
  DenseTensor out(shape);
  const std::size_t n = shape[0];
  const std::size_t q = shape[1];
  const std::size_t t = shape[2];
  for (std::size_t k = 0; k < t; ++k) {
    const double lt = spectra.size() == 3 ? spectra[2].eigenvalues[k] : 0.0;
    for (std::size_t j = 0; j < q; ++j) {
      const double lq = spectra[1].eigenvalues[j];
      for (std::size_t i = 0; i < n; ++i) out(i, j, k) = spectra[0].eigenvalues[i] + lq + lt;
    }
  }
  return out;
}

DenseTensor spectrum_sums(const PoissonOperator& op, SpectrumSource source) {
  return spectrum_sums(factor_spectra(op, source));
}

void center_inplace(DenseTensor& x, OpCounter* counter) {
  const double mean = sum(x) / double(x.size());
  for (double& v : x.data()) v -= mean;
  count(counter, 3 * x.size());
}

DenseTensor center(const DenseTensor& x, OpCounter* counter) {
  DenseTensor out = x;
  center_inplace(out, counter);
  return out;
}

double nullspace_component(const DenseTensor& x) { return std::abs(sum(x)) / std::sqrt(double(x.size())); }

bool BoundaryData::empty() const noexcept {
  return std::all_of(directions.begin(), directions.end(),
                     [](const DirectionBoundary& d) { return !d.begin && !d.end; });
}

namespace {

// Kind a face must carry under a BC, or nullopt when the face is periodic.
std::optional<FaceKind> required_kind(BoundaryCondition bc, bool begin) {
  switch (bc) {
    case BoundaryCondition::Periodic: return std::nullopt;
    case BoundaryCondition::Dirichlet: return FaceKind::Potential;
    case BoundaryCondition::Neumann: return FaceKind::Field;
    case BoundaryCondition::DirichletNeumann: return begin ? FaceKind::Potential : FaceKind::Field;
    case BoundaryCondition::NeumannDirichlet: return begin ? FaceKind::Field : FaceKind::Potential;
  }
  return std::nullopt;
}

const char* kind_name(FaceKind k) { return k == FaceKind::Potential ? "potential" : "field"; }

void check_face(const std::optional<FaceValue>& face, BoundaryCondition bc, bool begin, std::size_t mode) {
  if (!face) return;
  const auto need = required_kind(bc, begin);
  const std::string where = "direction " + std::to_string(mode) + (begin ? " begin" : " end");
  if (!need) fail(ErrorCode::InvalidArgument, where + ": periodic faces take no boundary data");
  if (*need != face->kind) {
    fail(ErrorCode::InvalidArgument, where + ": " + to_string(bc) + " expects a " + kind_name(*need) +
                                         " value, got a " + kind_name(face->kind) + " value");
  }
}

void add_to_slice(DenseTensor& h, std::size_t mode, std::size_t index, double value) {
  const Shape& s = h.shape();
  for (std::size_t k = 0; k < s[2]; ++k)
    for (std::size_t j = 0; j < s[1]; ++j)
      for (std::size_t i = 0; i < s[0]; ++i) {
        const std::size_t idx[3] = {i, j, k};
        if (idx[mode] == index) h(i, j, k) += value;
      }
}

}  // namespace

void validate_boundary_data(const PoissonOperator& op, const BoundaryData& bd) {
  for (std::size_t m = 0; m < 3; ++m) {
    const auto& d = bd.directions[m];
    if (m >= op.ndim()) {
      if (d.begin || d.end) fail(ErrorCode::InvalidArgument, "boundary data given for a missing direction");
      continue;
    }
    check_face(d.begin, op.factor(m).bc(), true, m);
    check_face(d.end, op.factor(m).bc(), false, m);
  }
}

DenseTensor apply_bc_updates(const PoissonOperator& op, const DenseTensor& h, const BoundaryData& bd) {
  if (!(h.shape() == op.shape())) fail(ErrorCode::ShapeMismatch, "apply_bc_updates: shape mismatch");
  validate_boundary_data(op, bd);
  DenseTensor out = h;
  for (std::size_t m = 0; m < op.ndim(); ++m) {
    const auto& d = bd.directions[m];
    if (d.begin) add_to_slice(out, m, 0, d.begin->value);
    if (d.end) add_to_slice(out, m, op.shape()[m] - 1, d.end->value);
  }
  return out;
}

}  // namespace kronpcg
