#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "kolmonet/matrix.hpp"

namespace kolmonet {

/// Sampling measure nu_d for error integrals: standard Gaussian or uniform on [lower, upper]^d.
struct SamplingMeasure {
  enum class Kind { gaussian, uniform };

  Kind kind = Kind::gaussian;
  double lower = -1.0;
  double upper = 1.0;

  static SamplingMeasure gaussian() { return {}; }
  static SamplingMeasure uniform(double lower, double upper);

  /// Point `index` of the deterministic sample sequence for (seed, d).
  Vector sample(std::size_t d, std::uint64_t seed, std::size_t index) const;
  std::string describe() const;
};

}  // namespace kolmonet
