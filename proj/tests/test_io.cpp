#include <gtest/gtest.h>

#include <filesystem>

#include "json.hpp"
#include "kronpcg/error.hpp"
#include "kronpcg/io.hpp"
#include "kronpcg/problems.hpp"
#include "test_support.hpp"

using namespace kronpcg;
namespace ts = testing_support;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("kronpcg_test_" + name); }

}  // namespace

TEST(TensorFile, HeaderText) {
  EXPECT_EQ(tensor_header(Shape{50, 100}), "KTEN 2 50 100\n");
  EXPECT_EQ(tensor_header(Shape{128, 64, 8}), "KTEN 3 128 64 8\n");
}

TEST(TensorFile, BitwiseRoundTrip) {
  DenseTensor t = ts::random_tensor(Shape{6, 5, 4});
  t.data()[3] = -0.0;
  t.data()[4] = 5e-324;
  const std::string bytes = encode_tensor(t);
  EXPECT_EQ(bytes.size(), tensor_header(t.shape()).size() + 8 * t.size());
  const DenseTensor back = decode_tensor(bytes);
  ASSERT_EQ(back.shape(), t.shape());
  EXPECT_EQ(std::memcmp(back.data().data(), t.data().data(), 8 * t.size()), 0);

  const fs::path p = temp_path("roundtrip.kten");
  write_tensor(p.string(), t);
  EXPECT_EQ(read_file(p.string()), bytes);
  EXPECT_EQ(read_tensor(p.string()), t);
  fs::remove(p);
}

TEST(TensorFile, LittleEndianPayload) {
  const DenseTensor t(Shape{3, 3}, 1.0);
  const std::string bytes = encode_tensor(t);
  const std::string payload = bytes.substr(tensor_header(t.shape()).size(), 8);
  // 1.0 = 0x3FF0000000000000
  EXPECT_EQ(payload, std::string("\x00\x00\x00\x00\x00\x00\xf0\x3f", 8));
}

TEST(TensorFile, RejectsMalformedInput) {
  const std::string good = encode_tensor(DenseTensor(Shape{3, 4}, 2.0));
  EXPECT_THROW((void)decode_tensor(""), Error);
  EXPECT_THROW((void)decode_tensor("XTEN 2 3 4\n"), Error);
  EXPECT_THROW((void)decode_tensor(good.substr(0, good.size() - 1)), Error);
  EXPECT_THROW((void)decode_tensor(good + "x"), Error);
  EXPECT_THROW((void)decode_tensor("KTEN 4 3 3 3 3\n"), Error);
  EXPECT_THROW((void)decode_tensor("KTEN 2 3\n"), Error);
  EXPECT_THROW((void)read_tensor(temp_path("does_not_exist").string()), Error);
  try {
    (void)read_tensor(temp_path("does_not_exist").string());
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(BoundaryFile, JsonRoundTrip) {
  BoundaryFile bf;
  bf.applied = true;
  bf.scale = 0.125;
  bf.data.directions[0].begin = FaceValue{FaceKind::Potential, 0.0};
  bf.data.directions[0].end = FaceValue{FaceKind::Field, -0.5};
  bf.data.directions[2].end = FaceValue{FaceKind::Potential, 3.25};
  const BoundaryFile back = boundary_from_json(boundary_to_json(bf));
  EXPECT_TRUE(back.applied);
  EXPECT_EQ(back.scale, 0.125);
  ASSERT_TRUE(back.data.directions[0].end.has_value());
  EXPECT_EQ(back.data.directions[0].end->kind, FaceKind::Field);
  EXPECT_EQ(back.data.directions[0].end->value, -0.5);
  EXPECT_FALSE(back.data.directions[1].begin.has_value());
  EXPECT_EQ(back.data.directions[2].end->value, 3.25);
  EXPECT_THROW((void)boundary_from_json("{\"x\": {\"begin\": {\"kind\": \"robin\", \"value\": 1}}}"), Error);
  EXPECT_THROW((void)boundary_from_json("not json"), Error);
}

TEST(RunLog, JsonStructure) {
  const Problem p = gen_problem1(5, 10);
  const PoissonOperator op = p.spec.make_operator();
  SolverConfig cfg;
  cfg.max_iter = 4;
  const SolveResult res = pcg(op, p.h, PinvPreconditioner(op), DenseTensor(op.shape()), cfg);
  RunInfo info{"p1", op.shape(), op.bcs(), "pinv", std::nullopt, cfg};
  const auto j = nlohmann::json::parse(run_log_json(info, res.log, &res.solution));
  for (const char* key : {"problem", "shape", "bcs", "preconditioner", "config", "initial", "iterations", "warnings", "status",
                          "final_norms", "ops"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["problem"], "p1");
  EXPECT_EQ(j["shape"], nlohmann::json::array({5, 10}));
  EXPECT_EQ(j["bcs"][0], "periodic");
  EXPECT_TRUE(j["seed"].is_null());
  EXPECT_LE(j["iterations"].size(), cfg.max_iter);
  EXPECT_EQ(j["iterations"].size() + 1, res.log.records.size());
  EXPECT_EQ(j["iterations"][0]["s"], 1);
  const auto& it0 = j["initial"];
  for (const char* key : {"s", "alpha", "beta", "rho", "computed_res", "true_res", "kappa", "eta_scaled",
                          "null_norm", "ops_cum"}) {
    EXPECT_TRUE(it0.contains(key)) << key;
  }
  EXPECT_DOUBLE_EQ(it0["true_res"].get<double>(), 1.0 / 50.0);
  EXPECT_TRUE(j["config"]["centered"].get<bool>());
  EXPECT_DOUBLE_EQ(j["final_norms"]["rhs"].get<double>(), 1.0 / 50.0);
}

TEST(RunLog, NanBecomesNull) {
  const PoissonOperator op(Shape{4, 4}, std::vector(2, BoundaryCondition::Dirichlet));
  SolverConfig cfg;
  cfg.max_iter = 2;
  cfg.record_true_residual = false;
  const SolveResult res = pcg(op, ts::random_tensor(op.shape()), IdentityPreconditioner(), DenseTensor(op.shape()), cfg);
  RunInfo info{"custom", op.shape(), op.bcs(), "none", 42u, cfg};
  const auto j = nlohmann::json::parse(run_log_json(info, res.log));
  EXPECT_TRUE(j["iterations"][0]["kappa"].is_null());
  EXPECT_EQ(j["seed"], 42);
}
