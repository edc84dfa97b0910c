#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "kolmonet/config.hpp"

namespace kolmonet {

enum ExitCode : int { kExitOk = 0, kExitTestFailure = 1, kExitConfigError = 2 };

struct CommandOptions {
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> suite;
  std::optional<double> delta;
  std::optional<std::size_t> samples;
  std::optional<double> epsilon;
  std::filesystem::path network;
  std::vector<Vector> points;
};

/// Counts as exact integers when they fit, otherwise scientific strings.
nlohmann::json wide_to_json(const Wide& x);
nlohmann::json to_json(const ComplexityReport& report);

/// One (d, delta, M, seed) grid point of a study.
struct ResultRow {
  std::size_t d = 0;
  double delta = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double lp_error = 0.0;
  double ci_halfwidth = 0.0;
  ParamCount p_Psi = 0;
  Wide predicted_p = 0;
  Wide bound_g_h = 0;
  bool user_scaled = true;
  double wall_time_seconds = 0.0;
};

/// Builds the estimator for (d, delta, M, seed) and measures its L^p(nu) error against the reference.
ResultRow run_grid_point(const Config& config, std::size_t d, double delta, std::size_t samples,
                         std::uint64_t seed, std::size_t n_eval_points, double p);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

int cmd_validate(const Config& config, const CommandOptions& opts, std::ostream& log);
int cmd_build(const Config& config, const CommandOptions& opts, std::ostream& log);
int cmd_eval(const Config& config, const CommandOptions& opts, std::ostream& log);
int cmd_study(const Config& config, const CommandOptions& opts, std::ostream& log);

}  // namespace kolmonet
