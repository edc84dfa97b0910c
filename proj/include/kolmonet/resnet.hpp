#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kolmonet/fnn.hpp"

namespace kolmonet {

/// One (shortcut, residual FNN) pair; the skip spans exactly this block.
struct ResidualBlock {
  Matrix shortcut;  // d_k x d_{k-1}
  Fnn residual;     // d_{k-1} -> d_k
};

/**
 * Residual network x_k = Gamma_k x_{k-1} + R(theta_k)(x_{k-1}), k = 1..n.
 *
 * Complexity counts the residual FNN parameters plus every shortcut entry:
 * sum_k (P(theta_k) + d_k d_{k-1}).
 */
class ResNet {
 public:
  explicit ResNet(std::vector<ResidualBlock> blocks);

  const std::vector<ResidualBlock>& blocks() const noexcept { return blocks_; }
  std::size_t length() const noexcept { return blocks_.size(); }
  std::size_t input_dim() const noexcept { return blocks_.front().residual.input_dim(); }
  std::size_t output_dim() const noexcept { return blocks_.back().residual.output_dim(); }
  /// (d_0, d_1, ..., d_n)
  std::vector<std::size_t> dims() const;
  ParamCount complexity() const;

 private:
  std::vector<ResidualBlock> blocks_;
};

Vector realize(const ResNet& net, const Activation& act, std::span<const double> x);

/// Block concatenation: `inner` runs first. Complexities add exactly.
ResNet compose(const ResNet& outer, const ResNet& inner);

/// Appends (0, phi) so the result realizes R(phi) o R(net).
ResNet append(const Fnn& phi, const ResNet& net);

/// Parallelization of equal-length ResNets whose i-th residual blocks share one architecture.
ResNet parallelize(std::span<const ResNet> nets);

/**
 * ResNet realizing x -> sum_j weights[j] R(nets[j])(x).
 *
 * The first block reads the input through the stacked identities A1 and the
 * last block writes through A2 = (w_1 I ... w_u I). For a single-block network
 * both act on that block.
 */
ResNet weighted_sum(std::span<const double> weights, std::span<const ResNet> nets);

/// Exact parameter count of weighted_sum(_, u copies of a network with these block architectures).
/// Computed from shapes alone, so `u` may be far beyond what can be built.
template <class Number>
Number weighted_sum_complexity(const std::vector<std::vector<std::size_t>>& block_archs,
                               const Number& u);

/// Shapes and entries equal, tiling ignored. Exact float comparison.
bool structurally_equal(const ResNet& a, const ResNet& b);
bool structurally_equal(const Fnn& a, const Fnn& b);

// ---------------------------------------------------------------------------

template <class Number>
Number weighted_sum_complexity(const std::vector<std::vector<std::size_t>>& block_archs,
                               const Number& u) {
  Number total = 0;
  const std::size_t n = block_archs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& arch = block_archs[i];
    const bool first_block = i == 0;
    const bool last_block = i + 1 == n;
    const std::size_t depth = arch.size() - 1;
    // Shortcut: A2 collapses the rows of the last block, A1 the columns of the first.
    const Number rows = last_block ? Number(arch.back()) : u * Number(arch.back());
    const Number cols = first_block ? Number(arch.front()) : u * Number(arch.front());
    total += rows * cols;
    for (std::size_t k = 1; k <= depth; ++k) {
      const Number r = (last_block && k == depth) ? Number(arch[k]) : u * Number(arch[k]);
      const Number c = (first_block && k == 1) ? Number(arch[0]) : u * Number(arch[k - 1]);
      total += r * (c + 1);
    }
  }
  return total;
}

}  // namespace kolmonet
