#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kolmonet/activation.hpp"
#include "kolmonet/matrix.hpp"

namespace kolmonet {

struct Layer {
  Matrix weights;  // l_k x l_{k-1}
  Vector bias;     // l_k
};

/**
 * Feedforward network: a non-empty chain of affine layers. Hidden layers are
 * followed by the activation, the output layer is affine only.
 *
 * Immutable after construction; the constructor rejects empty layer lists,
 * zero widths, bias/weight disagreement and broken chaining with DimensionMismatch.
 */
class Fnn {
 public:
  explicit Fnn(std::vector<Layer> layers);

  const std::vector<Layer>& layers() const noexcept { return layers_; }

  std::size_t depth() const noexcept { return layers_.size(); }
  std::size_t input_dim() const noexcept { return layers_.front().weights.cols(); }
  std::size_t output_dim() const noexcept { return layers_.back().weights.rows(); }
  /// (l_0, l_1, ..., l_L)
  std::vector<std::size_t> architecture() const;
  /// l_n for n <= depth, 0 beyond.
  std::size_t width(std::size_t n) const;
  /// sum_k l_k (l_{k-1} + 1)
  ParamCount complexity() const;

 private:
  std::vector<Layer> layers_;
};

struct FnnMetrics {
  std::size_t depth;
  std::size_t input_dim;
  std::size_t output_dim;
  std::vector<std::size_t> architecture;
  ParamCount complexity;
};

FnnMetrics metrics(const Fnn& net);

Vector realize(const Fnn& net, const Activation& act, std::span<const double> x);

/// outer . inner, fusing the last layer of `inner` with the first of `outer`.
Fnn compose(const Fnn& outer, const Fnn& inner);

/// Block-diagonal parallelization of equal-depth networks. Throws DepthMismatch.
Fnn parallelize(std::span<const Fnn> nets);

/// Realizes x -> m * R(net)(x). Only the output layer changes.
Fnn left_multiply(const Matrix& m, const Fnn& net);
/// Realizes x -> R(net)(m * x). Only the input layer changes.
Fnn right_multiply(const Fnn& net, const Matrix& m);

/**
 * Network realizing x -> sum_m weights[m] * R(nets[m])(x), built as
 * A2 * P(nets) * A1 with A1 the stacked input identities and
 * A2 = (w_1 I ... w_M I). All nets must share one architecture (ArchMismatch).
 */
Fnn weighted_sum(std::span<const double> weights, std::span<const Fnn> nets);

}  // namespace kolmonet
