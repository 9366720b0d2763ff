#include "kronpcg/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kronpcg/error.hpp"

namespace kronpcg {

namespace {

using nlohmann::json;

constexpr const char* kAxisNames[3] = {"x", "y", "z"};

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return __builtin_bswap64(v);
  }
}

json face_json(const std::optional<FaceValue>& f) {
  if (!f) return nullptr;
  return {{"kind", f->kind == FaceKind::Potential ? "potential" : "field"}, {"value", f->value}};
}

std::optional<FaceValue> face_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  const std::string kind = j.at("kind").get<std::string>();
  FaceValue f{FaceKind::Potential, j.at("value").get<double>()};
  if (kind == "field") f.kind = FaceKind::Field;
  else if (kind != "potential") fail(ErrorCode::InvalidArgument, "unknown face kind '" + kind + "'");
  return f;
}

}  // namespace

std::string tensor_header(const Shape& shape) {
  std::string out = "KTEN " + std::to_string(shape.ndim());
  for (std::size_t d : shape.dims()) out += " " + std::to_string(d);
  out += "\n";
  return out;
}

std::string encode_tensor(const DenseTensor& t) {
  std::string out = tensor_header(t.shape());
  const std::size_t offset = out.size();
  out.resize(offset + 8 * t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(t.data()[i]));
    std::memcpy(out.data() + offset + 8 * i, &bits, 8);
  }
  return out;
}

DenseTensor decode_tensor(const std::string& bytes) {
  const std::size_t eol = bytes.find('\n');
  if (eol == std::string::npos || eol > 128) fail(ErrorCode::Io, "tensor file: missing header line");
  std::istringstream header(bytes.substr(0, eol));
  std::string magic;
  std::size_t ndim = 0;
  header >> magic >> ndim;
  if (magic != "KTEN" || (ndim != 2 && ndim != 3)) fail(ErrorCode::Io, "tensor file: bad header");
  std::vector<std::size_t> dims(ndim);
  for (auto& d : dims) {
    if (!(header >> d) || d == 0) fail(ErrorCode::Io, "tensor file: bad dimensions");
  }
  std::string rest;
  if (header >> rest) fail(ErrorCode::Io, "tensor file: trailing header fields");
  const Shape shape{std::span<const std::size_t>(dims)};
  const std::size_t payload = bytes.size() - eol - 1;
  if (payload != 8 * shape.size()) {
    fail(ErrorCode::Io, "tensor file: expected " + std::to_string(8 * shape.size()) + " payload bytes, found " +
                            std::to_string(payload));
  }
  std::vector<double> data(shape.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, bytes.data() + eol + 1 + 8 * i, 8);
    data[i] = std::bit_cast<double>(to_little(bits));
  }
  return DenseTensor(shape, std::move(data));
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open '" + tmp + "' for writing");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) fail(ErrorCode::Io, "write to '" + tmp + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    fail(ErrorCode::Io, "cannot move '" + tmp + "' to '" + path + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_tensor(const std::string& path, const DenseTensor& t) { write_file_atomic(path, encode_tensor(t)); }

DenseTensor read_tensor(const std::string& path) { return decode_tensor(read_file(path)); }

std::string boundary_to_json(const BoundaryFile& bf) {
  const BoundaryData& bd = bf.data;
  json j = json::object();
  j["applied"] = bf.applied;
  j["scale"] = bf.scale;
  for (std::size_t m = 0; m < 3; ++m) {
    const auto& d = bd.directions[m];
    if (!d.begin && !d.end) continue;
    j[kAxisNames[m]] = {{"begin", face_json(d.begin)}, {"end", face_json(d.end)}};
  }
  return j.dump(2) + "\n";
}

BoundaryFile boundary_from_json(const std::string& text) {
  BoundaryFile bf;
  BoundaryData& bd = bf.data;
  try {
    const json j = json::parse(text);
    bf.applied = j.value("applied", false);
    bf.scale = j.value("scale", 1.0);
    for (std::size_t m = 0; m < 3; ++m) {
      if (!j.contains(kAxisNames[m])) continue;
      const json& d = j.at(kAxisNames[m]);
      if (d.contains("begin")) bd.directions[m].begin = face_from(d.at("begin"));
      if (d.contains("end")) bd.directions[m].end = face_from(d.at("end"));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::Io, std::string("boundary file: ") + e.what());
  }
  return bf;
}

std::string run_log_json(const RunInfo& info, const ConvergenceLog& log, const DenseTensor* solution) {
  json j;
  j["problem"] = info.problem;
  j["shape"] = std::vector<std::size_t>(info.shape.dims().begin(), info.shape.dims().end());
  json bcs = json::array();
  for (auto bc : info.bcs) bcs.push_back(to_string(bc));
  j["bcs"] = bcs;
  j["preconditioner"] = info.preconditioner;
  j["seed"] = info.seed ? json(*info.seed) : json(nullptr);
  j["config"] = {
      {"max_iter", info.config.max_iter},
      {"center", info.config.center == CenterMode::Auto ? "auto" : info.config.center == CenterMode::On ? "on" : "off"},
      {"centered", log.centered},
      {"tol", info.config.stop_tol ? json(*info.config.stop_tol) : json(nullptr)},
      {"variant", info.config.variant == ApplyVariant::Sparse ? "sparse" : "full"},
  };

  // The starting state (s = 0) is kept apart so "iterations" has at most
  // max_iter entries.
  json iters = json::array();
  for (std::size_t idx = 0; idx < log.records.size(); ++idx) {
    const auto& r = log.records[idx];
    const double eta = idx < log.eta.scaled.size() ? log.eta.scaled[idx] : std::nan("");
    json entry = {{"s", r.s},
                  {"alpha", r.alpha},
                  {"beta", r.beta},
                  {"rho", r.rho},
                  {"computed_res", r.computed_residual},
                  {"true_res", r.true_residual},
                  {"kappa", r.kappa},
                  {"eta_scaled", eta},
                  {"null_norm", r.null_norm},
                  {"solution_norm", r.solution_norm},
                  {"ops_cum", r.ops_cum}};
    if (idx == 0) {
      j["initial"] = std::move(entry);
    } else {
      iters.push_back(std::move(entry));
    }
  }
  j["iterations"] = iters;
  j["warnings"] = log.warnings;
  j["status"] = to_string(log.status);
  if (!log.breakdown_reason.empty()) j["breakdown_reason"] = log.breakdown_reason;

  json fin;
  fin["rhs"] = log.rhs_norm;
  if (!log.records.empty()) {
    const auto& last = log.records.back();
    fin["true_res"] = last.true_residual;
    fin["computed_res"] = last.computed_residual;
    fin["relative_true_res"] = log.rhs_norm > 0.0 ? last.true_residual / log.rhs_norm : 0.0;
  }
  if (solution != nullptr) fin["solution"] = frobenius_norm(*solution);
  j["final_norms"] = fin;
  j["ops"] = {{"solver", log.ops.solver.ops},
              {"preconditioner", log.ops.preconditioner.ops},
              {"centering", log.ops.centering.ops},
              {"stopping", log.ops.stopping.ops},
              {"diagnostics", log.ops.diagnostics.ops}};
  return j.dump(2) + "\n";
}

}  // namespace kronpcg
