#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kolmonet/resnet.hpp"

namespace kolmonet {

using Rng = std::mt19937_64;

/// Gaussian weights and biases with standard deviation `scale`.
Fnn random_fnn(Rng& rng, const std::vector<std::size_t>& arch, double scale = 0.5);
/// Random ResNet with the given block architectures; shortcuts are Gaussian too.
ResNet random_resnet(Rng& rng, const std::vector<std::vector<std::size_t>>& block_archs,
                     double scale = 0.5);
/// Architecture (l_0, ..., l_L) with widths in [1, max_width] and depth in [1, max_depth].
std::vector<std::size_t> random_arch(Rng& rng, std::size_t max_width, std::size_t max_depth);
Vector random_vector(Rng& rng, std::size_t n, double scale = 1.0);

/// |a - b| <= rel * (1 + |b|) in the Euclidean norm.
bool close(const Vector& a, const Vector& b, double rel);

struct CheckFailure {
  std::string check;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t checks = 0;
  std::vector<CheckFailure> failures;
  double seconds = 0.0;

  bool passed() const noexcept { return failures.empty(); }
};

/// Randomized property battery per module: "fnn", "resnet", "embedding".
const std::vector<std::string>& suite_names();
SuiteResult run_suite(const std::string& name, std::size_t cases, std::uint64_t seed);

}  // namespace kolmonet
