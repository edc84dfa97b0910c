#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kolmonet/kolmogorov.hpp"
#include "kolmonet/sde.hpp"

namespace kolmonet {

/**
 * Rule producing an approximating network for any dimension d and accuracy delta.
 *
 *   zero       depth-1 zero map R^d -> R^d
 *   linear     x -> G x with G = diag(coefficients) (one value broadcasts)
 *   affine     x -> <c, x> + offset
 *   relu       x -> max(<c, x> + offset, 0), one hidden unit
 *   random     Gaussian weights, hidden widths `hidden`, standard deviation `scale`
 *   file       network document at `path`
 *   per_delta  network documents per delta; the largest listed delta <= the requested
 *              one is used, the finest entry below all of them
 */
struct FamilyRule {
  std::string kind;
  std::vector<double> coefficients{1.0};
  double offset = 0.0;
  std::vector<std::size_t> hidden;
  double scale = 0.5;
  std::uint64_t seed = 1;
  std::filesystem::path path;
  std::vector<std::pair<double, std::filesystem::path>> table;
};

inline FamilyRule family(std::string kind) {
  FamilyRule r;
  r.kind = std::move(kind);
  return r;
}

struct DiffusionRule {
  std::string kind = "scalar";  // scalar | diag | dense
  std::vector<double> values{0.5};
};

struct ReferenceRule {
  std::string kind = "none";  // none or a ReferenceSolution kind name
  std::vector<double> coefficients{1.0};
  double offset = 0.0;
  std::vector<double> drift{0.0};  // diagonal of G
  std::optional<double> sigma;
};

struct StudyConfig {
  std::vector<double> epsilon_grid;
  std::vector<std::size_t> d_grid;
  std::vector<double> delta_grid;
  std::vector<std::size_t> m_grid;
  std::size_t n_eval_points = 200;
  double p = 2.0;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_path = "study_out";
};

struct Config {
  std::filesystem::path source;
  std::size_t d = 1;
  double horizon = 1.0;
  double kappa = 1.0;
  double eta = 1.0;
  double p = 2.0;
  std::string activation = "relu";
  DiffusionRule diffusion;
  FamilyRule phi0 = family("affine");
  FamilyRule phi1 = family("zero");
  SamplingMeasure nu;
  std::optional<double> f1_norm_at_0;
  ReferenceRule reference;
  double max_parameters = 5e7;
  std::uint64_t seed = 1;
  double delta = 0.5;
  std::size_t samples = 16;
  std::vector<Vector> eval_points;
  std::size_t validate_cases = 200;
  StudyConfig study;
};

/// Parses YAML text; relative paths resolve against `base_dir`. Throws ConfigParse.
Config parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
Config load_config(const std::filesystem::path& path);

/// Problem instance for dimension d. Network files load here; failures raise ConfigParse.
ProblemSpec make_problem(const Config& config, std::size_t d);

/// Exact u(T, .) for dimension d, or nullopt when the config names no reference.
/// The discrete recursion uses the grid of `delta`.
std::optional<ReferenceSolution> make_reference(const Config& config, std::size_t d, double delta);

Matrix make_diffusion(const DiffusionRule& rule, std::size_t d);
FnnFamily make_family(const FamilyRule& rule, std::size_t d, std::size_t out_dim);

}  // namespace kolmonet
