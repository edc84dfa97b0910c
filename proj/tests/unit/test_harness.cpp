#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kolmonet/error.hpp"
#include "kolmonet/harness.hpp"
#include "kolmonet/serialize.hpp"

using namespace kolmonet;

namespace {

const std::filesystem::path kSource = KOLMONET_SOURCE_DIR;

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "kolmonet_harness_test" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

Config one_dim() {
  return parse_config(
      "problem: {d: 1, T: 1.0, diffusion: {kind: scalar, value: 0.5}}\n"
      "reference: {kind: affine_no_drift}\n"
      "build: {delta: 0.5, samples: 4}\nseed: 3\n");
}

}  // namespace

TEST(Harness, WideToJson) {
  EXPECT_EQ(wide_to_json(Wide(165)), nlohmann::json(165));
  EXPECT_TRUE(wide_to_json(Wide("1e40")).is_string());
}

TEST(Harness, FitSlope) {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, -1, -3, -5};
  EXPECT_DOUBLE_EQ(fit_slope(x, y), -2.0);
}

TEST(Harness, BuildIsDeterministicAndCountsMatch) {
  const Config c = one_dim();
  std::ostringstream log;
  CommandOptions a;
  a.out = scratch("build_a");
  CommandOptions b;
  b.out = scratch("build_b");
  ASSERT_EQ(cmd_build(c, a, log), kExitOk);
  ASSERT_EQ(cmd_build(c, b, log), kExitOk);
  EXPECT_EQ(slurp(a.out / "estimator.json"), slurp(b.out / "estimator.json"));
  const auto report = load_json(a.out / "report.json");
  EXPECT_EQ(report["p_Psi"], 165);
  EXPECT_EQ(report["p_varphi"], 18);
  EXPECT_EQ(load_resnet(a.out / "estimator.json").complexity(), 165u);

  CommandOptions other;
  other.out = scratch("build_c");
  other.seed = 4;
  ASSERT_EQ(cmd_build(c, other, log), kExitOk);
  EXPECT_NE(slurp(a.out / "estimator.json"), slurp(other.out / "estimator.json"));
}

TEST(Harness, FormulaBuildIsNotMaterializable) {
  const Config c = one_dim();
  std::ostringstream log;
  CommandOptions opts;
  opts.out = scratch("formula");
  opts.epsilon = 0.9;
  EXPECT_THROW(cmd_build(c, opts, log), NotMaterializable);
  const auto report = load_json(opts.out / "report.json");
  EXPECT_FALSE(report["materializable"].get<bool>());
  EXPECT_FALSE(report["user_scaled"].get<bool>());
}

TEST(Harness, OverBudgetUserBuild) {
  Config c = one_dim();
  c.max_parameters = 100;
  std::ostringstream log;
  CommandOptions opts;
  opts.out = scratch("budget");
  EXPECT_THROW(cmd_build(c, opts, log), NotMaterializable);
}

TEST(Harness, EvalAgainstReference) {
  const Config c = one_dim();
  std::ostringstream log;
  CommandOptions opts;
  opts.out = scratch("eval");
  ASSERT_EQ(cmd_build(c, opts, log), kExitOk);
  opts.points = {Vector{0.5}, Vector{-1.0}};
  ASSERT_EQ(cmd_eval(c, opts, log), kExitOk);
  EXPECT_EQ(first_line(opts.out / "eval.csv"), "index,x,value,reference,difference");
  const auto doc = load_json(opts.out / "eval.json");
  EXPECT_EQ(doc["points"].size(), 2u);
  EXPECT_EQ(doc["points"][0]["reference"], 0.5);
  EXPECT_TRUE(doc.contains("lp_error"));
  opts.points = {Vector{0.5, 1.0}};
  EXPECT_THROW(cmd_eval(c, opts, log), ConfigParse);
}

TEST(Harness, ValidateSuiteFilter) {
  Config c = one_dim();
  c.validate_cases = 10;
  std::ostringstream log;
  CommandOptions opts;
  opts.out = scratch("validate");
  opts.suite = "fnn";
  EXPECT_EQ(cmd_validate(c, opts, log), kExitOk);
  const auto report = load_json(opts.out / "validate_report.json");
  ASSERT_EQ(report["suites"].size(), 1u);
  EXPECT_EQ(report["suites"][0]["name"], "fnn");
  EXPECT_NE(log.str().find("PASS fnn"), std::string::npos);
  opts.suite = "nope";
  EXPECT_THROW(cmd_validate(c, opts, log), ConfigParse);
}

TEST(Harness, StudyOutputsAreStableAndReproducible) {
  const std::string text =
      "problem: {d: 1, diffusion: {kind: scalar, value: 0.5}}\n"
      "reference: {kind: affine_no_drift}\n"
      "study: {epsilon_grid: [1.0], d_grid: [1, 2], delta_grid: [1.0, 0.5], M_grid: [4, 16], seeds: [1, 2],"
      " n_eval_points: 100}\n";
  const Config c = parse_config(text);
  std::ostringstream log;
  CommandOptions a;
  a.out = scratch("study_a");
  CommandOptions b;
  b.out = scratch("study_b");
  ASSERT_EQ(cmd_study(c, a, log), kExitOk);
  ASSERT_EQ(cmd_study(c, b, log), kExitOk);
  EXPECT_EQ(first_line(a.out / "results.csv"),
            "d,delta,M,seed,lp_error,ci_halfwidth,p_Psi,predicted_p,bound_g_h,user_scaled,wall_time_seconds");
  EXPECT_EQ(first_line(a.out / "error_vs_M.csv"), "d,delta,M,rms_lp_error,seeds");
  EXPECT_EQ(first_line(a.out / "complexity_vs_d.csv"), "d,delta,M,p_Psi,p_phi1,log_d,log_p_Psi");
  EXPECT_EQ(first_line(a.out / "budget.csv"),
            "d,epsilon,status,M,delta,p_Psi,bound_g_h,bound_final,chain_monotone,materializable");

  // Every column except the wall time reproduces.
  const auto strip_time = [](const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      out += line.substr(0, line.rfind(',')) + "\n";
      ++rows;
    }
    return std::make_pair(out, rows);
  };
  const auto [ra, rows] = strip_time(slurp(a.out / "results.csv"));
  EXPECT_EQ(ra, strip_time(slurp(b.out / "results.csv")).first);
  EXPECT_EQ(rows, 1u + 2 * 2 * 2 * 2);
  EXPECT_EQ(slurp(a.out / "budget.csv"), slurp(b.out / "budget.csv"));
  const auto slopes = load_json(a.out / "slopes.json");
  EXPECT_TRUE(slopes.contains("error_vs_M"));
  EXPECT_TRUE(slopes.contains("p_Psi_vs_d"));
}

TEST(Harness, StudyRejectsEmptyGrid) {
  Config c = one_dim();
  std::ostringstream log;
  CommandOptions opts;
  opts.out = scratch("study_empty");
  EXPECT_THROW(cmd_study(c, opts, log), ConfigParse);
}
