// kronpcg command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kronpcg/kronpcg_c.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBreakdown = 2;

// Thrown for usage and input errors; maps to exit code 1.
struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(kp_status st, const std::string& context) {
  if (st != KP_OK) throw CliError(context + ": " + kp_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Tensor = std::unique_ptr<kp_tensor, Deleter<kp_tensor, kp_tensor_free>>;
using Operator = std::unique_ptr<kp_operator, Deleter<kp_operator, kp_operator_free>>;
using Boundary = std::unique_ptr<kp_boundary, Deleter<kp_boundary, kp_boundary_free>>;
using Precond = std::unique_ptr<kp_precond, Deleter<kp_precond, kp_precond_free>>;
using ProblemPtr = std::unique_ptr<kp_problem, Deleter<kp_problem, kp_problem_free>>;
using RunLog = std::unique_ptr<kp_runlog, Deleter<kp_runlog, kp_runlog_free>>;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::size_t axis_index(const std::string& name) {
  if (name == "x") return 0;
  if (name == "y") return 1;
  if (name == "z") return 2;
  throw CliError("unknown axis '" + name + "' (expected x, y or z)");
}

std::pair<std::size_t, std::string> split_axis_value(const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos) throw CliError("expected <axis>=<value>, got '" + item + "'");
  return {axis_index(item.substr(0, eq)), item.substr(eq + 1)};
}

kp_bc parse_bc(const std::string& name) {
  kp_bc bc;
  check(kp_bc_parse(name.c_str(), &bc), "boundary condition");
  return bc;
}

// "x=periodic,y=dirichlet-neumann" -> per-axis BCs (all axes up to ndim required).
std::vector<kp_bc> parse_bc_list(const std::string& text, std::size_t ndim) {
  std::map<std::size_t, kp_bc> by_axis;
  for (const auto& item : split(text, ',')) {
    const auto [axis, value] = split_axis_value(item);
    by_axis[axis] = parse_bc(value);
  }
  std::vector<kp_bc> out;
  for (std::size_t m = 0; m < ndim; ++m) {
    const auto it = by_axis.find(m);
    if (it == by_axis.end()) throw CliError(std::string("--bc is missing axis ") + "xyz"[m]);
    out.push_back(it->second);
  }
  if (by_axis.size() != ndim) throw CliError("--bc names an axis the input does not have");
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CliError("not a number: '" + s + "'");
  }
}

std::vector<std::size_t> dims_of(const kp_tensor* t) {
  std::size_t d[3];
  kp_tensor_dims(t, d);
  return {d, d + kp_tensor_ndim(t)};
}

std::string shape_str(const std::vector<std::size_t>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "x" : "") + std::to_string(dims[i]);
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw CliError("cannot write '" + tmp.string() + "'");
    out << text;
  }
  fs::rename(tmp, path);
}

kp_center_mode parse_center(const std::string& s) {
  if (s == "auto") return KP_CENTER_AUTO;
  if (s == "on") return KP_CENTER_ON;
  if (s == "off") return KP_CENTER_OFF;
  throw CliError("--center must be auto, on or off");
}

// Prints the first warning of a run and how many followed; the log has all of them.
void report_warnings(const kp_runlog* log, const std::string& prefix) {
  const std::size_t n = kp_runlog_warning_count(log);
  if (n == 0) return;
  std::cerr << "warning: " << prefix << kp_runlog_warning(log, 0);
  if (n > 1) std::cerr << " (" << n - 1 << " more in the log)";
  std::cerr << "\n";
}

struct SolveOutcome {
  RunLog log;
  Tensor solution;
};

SolveOutcome solve(const kp_operator* op, const kp_tensor* h, const std::string& precond_spec,
                   const kp_solve_options& opts) {
  Precond m;
  kp_precond* raw = nullptr;
  check(kp_precond_create(op, precond_spec.c_str(), &raw), "preconditioner");
  m.reset(raw);
  kp_tensor* u = nullptr;
  kp_runlog* log = nullptr;
  check(kp_solve(op, h, m.get(), nullptr, &opts, &u, &log), "solve");
  return {RunLog(log), Tensor(u)};
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string problem;
  std::string size = "50x100";
  std::string variant = "3d_128x64x8";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t period = 0;
  std::size_t slope = 0;
  std::string out = "h.kten";
  std::string boundary_out;
};

ProblemPtr generate(const std::string& name, const std::string& variant, const kp_problem_options& opts) {
  kp_problem* p = nullptr;
  check(kp_problem_generate(name.c_str(), variant.c_str(), &opts, &p), "gen");
  return ProblemPtr(p);
}

int cmd_gen(const GenArgs& a) {
  kp_problem_options opts;
  kp_problem_options_default(&opts);
  if (a.seed_set) opts.seed = a.seed;
  opts.period = a.period;
  opts.slope = a.slope;
  const std::string variant = a.problem == "p1" ? a.size : a.problem == "p3" ? a.variant : "";
  const ProblemPtr p = generate(a.problem, variant, opts);

  kp_tensor* raw = nullptr;
  check(kp_problem_rhs(p.get(), &raw), "gen");
  const Tensor h(raw);
  check(kp_tensor_write(h.get(), a.out.c_str()), "write");

  kp_boundary* braw = nullptr;
  check(kp_problem_boundary(p.get(), &braw), "gen");
  const Boundary b(braw);
  std::string boundary_path;
  if (!kp_boundary_empty(b.get())) {
    boundary_path = a.boundary_out.empty() ? a.out + ".boundary.json" : a.boundary_out;
    check(kp_boundary_write(b.get(), boundary_path.c_str()), "write");
  }
  std::cout << "problem " << kp_problem_name(p.get()) << " " << kp_problem_variant(p.get()) << " shape "
            << shape_str(dims_of(h.get())) << " norm " << fmt(kp_tensor_norm(h.get())) << " -> " << a.out;
  if (!boundary_path.empty()) std::cout << " (boundary data " << boundary_path << ")";
  std::cout << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string input;
  std::string bc;
  std::vector<std::string> u_begin, u_end, e_begin, e_end;
  std::string boundary_file;
  std::string precond = "pinv";
  std::size_t max_iter = 10;
  double tol = 0.0;
  std::string center = "auto";
  std::string log;
  std::string solution;
  std::string problem_name;
  bool full_apply = false;
};

int cmd_solve(const SolveArgs& a) {
  kp_tensor* raw = nullptr;
  check(kp_tensor_read(a.input.c_str(), &raw), "read");
  Tensor h(raw);
  const auto dims = dims_of(h.get());
  const auto bcs = parse_bc_list(a.bc, dims.size());

  kp_operator* oraw = nullptr;
  check(kp_operator_create(dims.size(), dims.data(), bcs.data(), &oraw), "operator");
  const Operator op(oraw);

  // Boundary data: sidecar file first, then individual flags on top.
  Boundary b;
  kp_boundary* braw = nullptr;
  if (!a.boundary_file.empty()) {
    check(kp_boundary_read(a.boundary_file.c_str(), &braw), "boundary");
  } else {
    check(kp_boundary_create(&braw), "boundary");
  }
  b.reset(braw);
  auto add_faces = [&](const std::vector<std::string>& items, int at_end, kp_face_kind kind) {
    for (const auto& item : items) {
      const auto [axis, value] = split_axis_value(item);
      check(kp_boundary_set(b.get(), axis, at_end, kind, parse_double(value)), "boundary");
    }
  };
  add_faces(a.u_begin, 0, KP_FACE_POTENTIAL);
  add_faces(a.u_end, 1, KP_FACE_POTENTIAL);
  add_faces(a.e_begin, 0, KP_FACE_FIELD);
  add_faces(a.e_end, 1, KP_FACE_FIELD);
  if (!kp_boundary_empty(b.get())) {
    if (kp_boundary_applied(b.get())) {
      std::cerr << "note: boundary updates are already part of the input; checking BC compatibility only\n";
    }
    kp_tensor* updated = nullptr;
    check(kp_boundary_apply(op.get(), b.get(), h.get(), &updated), "boundary");
    h.reset(updated);
  }

  kp_solve_options opts;
  kp_solve_options_default(&opts);
  opts.max_iter = a.max_iter;
  opts.tol = a.tol;
  opts.center = parse_center(a.center);
  opts.full_apply = a.full_apply ? 1 : 0;

  if (kp_operator_is_singular(op.get())) {
    const double mean_part = kp_tensor_nullspace_component(h.get());
    if (mean_part > 1e-10 * std::max(kp_tensor_norm(h.get()), 1.0)) {
      if (opts.center == KP_CENTER_OFF) {
        throw CliError("operator is singular and the right-hand side has a nonzero mean (" + fmt(mean_part) +
                       "); refusing to solve with --center off");
      }
      kp_tensor_center(h.get());
      std::cerr << "note: singular operator, right-hand side centered (removed component " << fmt(mean_part)
                << ")\n";
    }
  }

  const SolveOutcome res = solve(op.get(), h.get(), a.precond, opts);
  const kp_runlog* log = res.log.get();
  const std::size_t count = kp_runlog_count(log);
  kp_iteration last{};
  check(kp_runlog_iteration(log, count - 1, &last), "log");
  const double rhs = kp_runlog_rhs_norm(log);

  std::cout << "preconditioner " << a.precond << "\n";
  std::cout << "iterations " << last.s << "\n";
  std::cout << "relative_true_residual " << fmt(rhs > 0 ? last.true_res / rhs : 0.0) << "\n";
  report_warnings(log, "");

  if (!a.log.empty()) {
    const std::string name = a.problem_name.empty() ? fs::path(a.input).filename().string() : a.problem_name;
    check(kp_runlog_write_json(log, a.log.c_str(), name.c_str(), 0, 0), "log");
  }
  if (!a.solution.empty()) check(kp_tensor_write(res.solution.get(), a.solution.c_str()), "solution");

  if (kp_runlog_status(log) == KP_SOLVE_BREAKDOWN) {
    std::cerr << "breakdown: " << kp_runlog_breakdown_reason(log) << "\n";
    return kExitBreakdown;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentArgs {
  std::string name;
  std::string out_dir = "results";
  std::size_t max_iter = 0;  // 0 = experiment default
  std::size_t jacobi_max = 100000;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

struct SummaryRow {
  std::string problem;
  std::string preconditioner;
  std::optional<std::size_t> iters;
  double final_rel = 0.0;
  std::uint64_t ops = 0;
};

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  return out;
}

class ExperimentWriter {
 public:
  explicit ExperimentWriter(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  // Writes the JSON log and a gnuplot series "s ops_cum rel_true_res eta_scaled".
  void add_pcg(const std::string& problem, const std::string& label, const kp_runlog* log, bool has_seed,
               std::uint64_t seed) {
    const std::string base = slug(problem + "_" + label);
    check(kp_runlog_write_json(log, (dir_ / (base + ".json")).c_str(), problem.c_str(), has_seed ? 1 : 0, seed),
          "log");
    const double rhs = kp_runlog_rhs_norm(log);
    std::ostringstream dat;
    dat << "# s ops_cum relative_true_residual eta_scaled\n";
    kp_iteration it{};
    for (std::size_t i = 0; i < kp_runlog_count(log); ++i) {
      check(kp_runlog_iteration(log, i, &it), "log");
      dat << it.s << " " << it.ops_cum << " " << fmt(it.true_res / rhs) << " " << fmt(it.eta_scaled) << "\n";
    }
    write_text(dir_ / (base + ".dat"), dat.str());
    std::size_t reached = 0;
    SummaryRow row{problem, label, std::nullopt, it.true_res / rhs, it.ops_cum};
    if (kp_runlog_iterations_to(log, 1e-9, &reached)) row.iters = reached;
    rows_.push_back(row);
    report_warnings(log, "[" + problem + " " + label + "] ");
  }

  void add_stationary(const std::string& problem, const std::string& label, const std::vector<double>& res,
                      const std::vector<std::uint64_t>& ops, double rhs) {
    const std::string base = slug(problem + "_" + label);
    std::ostringstream dat;
    dat << "# s ops_cum relative_true_residual\n";
    std::optional<std::size_t> reached;
    for (std::size_t s = 0; s < res.size(); ++s) {
      dat << s << " " << ops[s] << " " << fmt(res[s] / rhs) << "\n";
      if (!reached && res[s] <= 1e-9 * rhs) reached = s;
    }
    write_text(dir_ / (base + ".dat"), dat.str());
    rows_.push_back({problem, label, reached, res.back() / rhs, ops.back()});
  }

  void finish() const {
    std::ostringstream csv;
    csv << "problem,preconditioner,iters_to_1e-9,final_true_res,ops_cum\n";
    for (const auto& r : rows_) {
      csv << r.problem << "," << r.preconditioner << "," << (r.iters ? std::to_string(*r.iters) : "") << ","
          << fmt(r.final_rel) << "," << r.ops << "\n";
    }
    write_text(dir_ / "summary.csv", csv.str());
    std::cout << csv.str();
  }

 private:
  fs::path dir_;
  std::vector<SummaryRow> rows_;
};

struct LoadedProblem {
  ProblemPtr problem;
  Operator op;
  Tensor h;
  std::string label;
};

LoadedProblem load(const std::string& name, const std::string& variant, const kp_problem_options& opts) {
  LoadedProblem lp;
  lp.problem = generate(name, variant, opts);
  kp_operator* op = nullptr;
  check(kp_problem_operator(lp.problem.get(), &op), "operator");
  lp.op.reset(op);
  kp_tensor* h = nullptr;
  check(kp_problem_rhs(lp.problem.get(), &h), "rhs");
  lp.h.reset(h);
  lp.label = name + "_" + kp_problem_variant(lp.problem.get());
  return lp;
}

// CG against stand-alone Jacobi on problem 1 at 50x100.
void run_exp1(const ExperimentArgs& a, ExperimentWriter& w, const kp_problem_options& popts) {
  const LoadedProblem p = load("p1", "50x100", popts);
  kp_solve_options opts;
  kp_solve_options_default(&opts);
  opts.max_iter = a.max_iter ? a.max_iter : 1000;
  opts.tol = 1e-13;
  const SolveOutcome cg = solve(p.op.get(), p.h.get(), "none", opts);
  w.add_pcg(p.label, "cg", cg.log.get(), false, 0);

  const double rhs = kp_tensor_norm(p.h.get());
  for (double omega : {1.0, 1.15, 1.3}) {
    std::vector<double> res(a.jacobi_max + 1);
    std::vector<std::uint64_t> ops(a.jacobi_max + 1);
    std::size_t steps = 0;
    int diverged = 0;
    check(kp_jacobi_standalone(p.op.get(), p.h.get(), omega, a.jacobi_max, 1e-13 * rhs, res.data(), ops.data(),
                               &steps, &diverged),
          "jacobi");
    res.resize(steps + 1);
    ops.resize(steps + 1);
    std::ostringstream label;
    label << "jacobi_omega=" << omega;
    w.add_stationary(p.label, label.str(), res, ops, rhs);
  }
}

// Preconditioner comparison on problem 1 at 50x100.
void run_exp2(const ExperimentArgs& a, ExperimentWriter& w, const kp_problem_options& popts) {
  const LoadedProblem p = load("p1", "50x100", popts);
  kp_solve_options opts;
  kp_solve_options_default(&opts);
  opts.max_iter = a.max_iter ? a.max_iter : 300;
  // Iterating far below machine precision only produces rounding noise.
  opts.tol = 1e-13;
  std::vector<std::string> configs = {"none", "jacobi:p=3,omega=1.3", "lowrank:r=3", "pinv"};
  for (int sweeps : {1, 2, 3, 5}) {
    for (const char* omega : {"1", "1.15", "1.3"}) {
      const std::string c = "jacobi:p=" + std::to_string(sweeps) + ",omega=" + omega;
      if (c != configs[1]) configs.push_back(c);
    }
  }
  for (int r : {1, 2, 4, 5, 8}) configs.push_back("lowrank:r=" + std::to_string(r));
  for (const auto& c : configs) {
    const SolveOutcome res = solve(p.op.get(), p.h.get(), c, opts);
    w.add_pcg(p.label, c, res.log.get(), false, 0);
  }
}

// Pseudoinverse preconditioner on all nine right-hand sides.
void run_exp3(const ExperimentArgs& a, ExperimentWriter& w, const kp_problem_options& popts) {
  kp_solve_options opts;
  kp_solve_options_default(&opts);
  opts.max_iter = a.max_iter ? a.max_iter : 10;
  std::vector<std::pair<std::string, std::string>> problems = {
      {"p1", "5x10"}, {"p1", "20x40"}, {"p1", "50x100"}, {"p1", "500x1000"}, {"p2", ""}};
  for (std::size_t i = 0; i < kp_problem3_variant_count(); ++i) problems.emplace_back("p3", kp_problem3_variant(i));
  for (const auto& [name, variant] : problems) {
    const LoadedProblem p = load(name, variant, popts);
    const SolveOutcome res = solve(p.op.get(), p.h.get(), "pinv", opts);
    w.add_pcg(p.label, "pinv", res.log.get(), name == "p3", kp_problem_seed(p.problem.get()));
  }
}

int cmd_experiment(const ExperimentArgs& a) {
  kp_problem_options popts;
  kp_problem_options_default(&popts);
  if (a.seed_set) popts.seed = a.seed;
  ExperimentWriter w(fs::path(a.out_dir) / a.name);
  if (a.name == "exp1") run_exp1(a, w, popts);
  else if (a.name == "exp2") run_exp2(a, w, popts);
  else if (a.name == "exp3") run_exp3(a, w, popts);
  else throw CliError("unknown experiment '" + a.name + "' (expected exp1, exp2 or exp3)");
  w.finish();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumArgs {
  std::size_t n = 0;
  std::string size;
  std::string bc;
  bool numeric = false;
  bool extrema = false;
};

int cmd_spectrum(const SpectrumArgs& a) {
  std::vector<std::size_t> dims;
  std::vector<kp_bc> bcs;
  if (!a.size.empty()) {
    if (a.n != 0) throw CliError("give either --n or --size");
    for (const auto& d : split(a.size, 'x')) dims.push_back(std::stoul(d));
    if (dims.empty() || dims.size() > 3) throw CliError("--size must have 1 to 3 extents");
    bcs = a.bc.find('=') == std::string::npos ? std::vector<kp_bc>(dims.size(), parse_bc(a.bc))
                                               : parse_bc_list(a.bc, dims.size());
  } else {
    if (a.n == 0) throw CliError("--n or --size is required");
    dims = {a.n};
    bcs = {parse_bc(a.bc)};
  }

  std::cout << "axis,k,eigenvalue\n";
  double sum_min = 0.0;
  double sum_max = 0.0;
  for (std::size_t m = 0; m < dims.size(); ++m) {
    std::vector<double> ev(dims[m]);
    check(kp_spectrum_1d(dims[m], bcs[m], a.numeric ? 0 : 1, ev.data()), "spectrum");
    for (std::size_t k = 0; k < ev.size(); ++k) std::cout << "xyz"[m] << "," << k + 1 << "," << fmt(ev[k]) << "\n";
    sum_min += ev.front();
    sum_max += ev.back();
  }
  if (a.extrema) {
    std::cout << "sum,min," << fmt(sum_min) << "\n";
    std::cout << "sum,max," << fmt(sum_max) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kronecker-structured PCG solver for finite-difference Poisson problems"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a test right-hand side");
  g->add_option("--problem", gen.problem, "p1 | p2 | p3")->required()->check(CLI::IsMember({"p1", "p2", "p3"}));
  g->add_option("--size", gen.size, "grid size for p1, e.g. 50x100");
  g->add_option("--variant", gen.variant, "p3 variant: 2d_512x256 | 3d_128x64x8 | 3d_128x64x64 | 3d_512x256x8");
  g->add_option("--seed", gen.seed, "p3 random seed")->each([&](const std::string&) { gen.seed_set = true; });
  g->add_option("--period", gen.period, "p1 stripe period (default: q)");
  g->add_option("--slope", gen.slope, "p1 stripe slope (default: 2)");
  g->add_option("--out", gen.out, "output tensor file");
  g->add_option("--boundary-out", gen.boundary_out, "boundary-data sidecar (p2); default <out>.boundary.json");

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "solve A U = H with PCG");
  s->add_option("--input", sol.input, "right-hand side tensor file")->required();
  s->add_option("--bc", sol.bc, "per-axis BCs, e.g. x=periodic,y=dirichlet-neumann")->required();
  s->add_option("--uB", sol.u_begin, "potential at the first face, <axis>=<value>");
  s->add_option("--uE", sol.u_end, "potential at the last face, <axis>=<value>");
  s->add_option("--eB", sol.e_begin, "field at the first face, <axis>=<value>");
  s->add_option("--eE", sol.e_end, "field at the last face, <axis>=<value>");
  s->add_option("--boundary", sol.boundary_file, "boundary-data JSON (as written by gen)");
  s->add_option("--precond", sol.precond, "pinv | jacobi:p=3,omega=1.3 | lowrank:r=3 | none");
  s->add_option("--max-iter", sol.max_iter, "iteration cap");
  s->add_option("--tol", sol.tol, "relative true-residual stopping tolerance (0 = run max-iter)");
  s->add_option("--center", sol.center, "auto | on | off")->check(CLI::IsMember({"auto", "on", "off"}));
  s->add_option("--log", sol.log, "JSON run log");
  s->add_option("--solution", sol.solution, "solution tensor file");
  s->add_option("--name", sol.problem_name, "problem name recorded in the log");
  s->add_flag("--full-apply", sol.full_apply, "apply the operator with dense 1D matrices");

  ExperimentArgs ex;
  auto* e = app.add_subcommand("experiment", "run a predefined experiment");
  e->add_option("name", ex.name, "exp1 | exp2 | exp3")->required()->check(CLI::IsMember({"exp1", "exp2", "exp3"}));
  e->add_option("--out-dir", ex.out_dir, "output directory");
  e->add_option("--max-iter", ex.max_iter, "PCG iteration cap (default depends on experiment)");
  e->add_option("--jacobi-max", ex.jacobi_max, "stand-alone Jacobi iteration cap (exp1)");
  e->add_option("--seed", ex.seed, "p3 random seed")->each([&](const std::string&) { ex.seed_set = true; });

  SpectrumArgs sp;
  auto* p = app.add_subcommand("spectrum", "print 1D Laplacian eigenvalues");
  p->add_option("--n", sp.n, "size of a single 1D factor");
  p->add_option("--size", sp.size, "grid size for several directions, e.g. 3x3");
  p->add_option("--bc", sp.bc, "BC name, or per-axis list with --size")->required();
  p->add_flag("--numeric", sp.numeric, "use the numeric eigensolver instead of closed forms");
  p->add_flag("--extrema", sp.extrema, "also print min and max of the eigenvalue-sum tensor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(sol);
    if (*e) return cmd_experiment(ex);
    if (*p) return cmd_spectrum(sp);
  } catch (const CliError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
