#include "kolmonet/resnet.hpp"

#include <string>
#include <utility>

#include "kolmonet/error.hpp"

namespace kolmonet {

ResNet::ResNet(std::vector<ResidualBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw DimensionMismatch("a ResNet needs at least one block");
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const auto& b = blocks_[k];
    const auto where = "block " + std::to_string(k + 1);
    if (b.shortcut.rows() != b.residual.output_dim() || b.shortcut.cols() != b.residual.input_dim()) {
      throw DimensionMismatch(where + ": shortcut is " + std::to_string(b.shortcut.rows()) + "x" +
                              std::to_string(b.shortcut.cols()) + ", residual maps " +
                              std::to_string(b.residual.input_dim()) + " -> " +
                              std::to_string(b.residual.output_dim()));
    }
    if (k > 0 && b.residual.input_dim() != blocks_[k - 1].residual.output_dim()) {
      throw DimensionMismatch(where + ": input " + std::to_string(b.residual.input_dim()) +
                              " != previous output " +
                              std::to_string(blocks_[k - 1].residual.output_dim()));
    }
  }
}

std::vector<std::size_t> ResNet::dims() const {
  std::vector<std::size_t> d;
  d.reserve(blocks_.size() + 1);
  d.push_back(input_dim());
  for (const auto& b : blocks_) d.push_back(b.residual.output_dim());
  return d;
}

ParamCount ResNet::complexity() const {
  ParamCount total = 0;
  for (const auto& b : blocks_) {
    total = checked_add(total, checked_add(b.residual.complexity(), b.shortcut.entry_count()));
  }
  return total;
}

Vector realize(const ResNet& net, const Activation& act, std::span<const double> x) {
  if (x.size() != net.input_dim()) {
    throw DimensionMismatch("ResNet input has length " + std::to_string(x.size()) + ", expected " +
                            std::to_string(net.input_dim()));
  }
  Vector current(x.begin(), x.end());
  for (const auto& b : net.blocks()) {
    Vector next = realize(b.residual, act, current);
    b.shortcut.apply_add(current, next);
    current = std::move(next);
  }
  return current;
}

ResNet compose(const ResNet& outer, const ResNet& inner) {
  if (outer.input_dim() != inner.output_dim()) {
    throw DimensionMismatch("ResNet composition: outer input " + std::to_string(outer.input_dim()) +
                            " != inner output " + std::to_string(inner.output_dim()));
  }
  std::vector<ResidualBlock> blocks = inner.blocks();
  blocks.insert(blocks.end(), outer.blocks().begin(), outer.blocks().end());
  return ResNet(std::move(blocks));
}

ResNet append(const Fnn& phi, const ResNet& net) {
  if (phi.input_dim() != net.output_dim()) {
    throw DimensionMismatch("appending FNN with input " + std::to_string(phi.input_dim()) +
                            " to ResNet with output " + std::to_string(net.output_dim()));
  }
  std::vector<ResidualBlock> blocks = net.blocks();
  blocks.push_back(ResidualBlock{Matrix::zeros(phi.output_dim(), phi.input_dim()), phi});
  return ResNet(std::move(blocks));
}

namespace {

void check_parallel_compatible(std::span<const ResNet> nets) {
  if (nets.empty()) throw InvalidArgument("parallelization of an empty list");
  const auto& ref = nets.front();
  for (const auto& net : nets) {
    if (net.length() != ref.length()) {
      throw ArchMismatch("ResNet parallelization needs equal lengths, got " +
                         std::to_string(ref.length()) + " and " + std::to_string(net.length()));
    }
    for (std::size_t i = 0; i < ref.length(); ++i) {
      if (net.blocks()[i].residual.architecture() != ref.blocks()[i].residual.architecture()) {
        throw ArchMismatch("residual block " + std::to_string(i + 1) +
                           " differs in architecture across parallelized ResNets");
      }
    }
  }
}

struct ParallelBlock {
  Matrix shortcut;
  Fnn residual;
};

ParallelBlock parallel_block(std::span<const ResNet> nets, std::size_t i) {
  std::vector<Matrix> shortcuts;
  std::vector<Fnn> residuals;
  shortcuts.reserve(nets.size());
  residuals.reserve(nets.size());
  for (const auto& net : nets) {
    shortcuts.push_back(net.blocks()[i].shortcut);
    residuals.push_back(net.blocks()[i].residual);
  }
  return ParallelBlock{Matrix::block_diagonal(shortcuts), parallelize(residuals)};
}

}  // namespace

ResNet parallelize(std::span<const ResNet> nets) {
  check_parallel_compatible(nets);
  if (nets.size() == 1) return nets.front();
  std::vector<ResidualBlock> blocks;
  blocks.reserve(nets.front().length());
  for (std::size_t i = 0; i < nets.front().length(); ++i) {
    auto pb = parallel_block(nets, i);
    blocks.push_back(ResidualBlock{std::move(pb.shortcut), std::move(pb.residual)});
  }
  return ResNet(std::move(blocks));
}

ResNet weighted_sum(std::span<const double> weights, std::span<const ResNet> nets) {
  if (weights.size() != nets.size()) {
    throw InvalidArgument("weighted sum needs one weight per ResNet");
  }
  check_parallel_compatible(nets);
  const std::size_t n = nets.front().length();
  const auto spread = Matrix::stacked_identity(nets.front().input_dim(), nets.size());
  const auto gather = Matrix::weighted_identity_row(nets.front().output_dim(), weights);

  std::vector<ResidualBlock> blocks;
  blocks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto pb = parallel_block(nets, i);
    Matrix shortcut = std::move(pb.shortcut);
    Fnn residual = std::move(pb.residual);
    if (i == 0) {
      shortcut = shortcut * spread;
      residual = right_multiply(residual, spread);
    }
    if (i + 1 == n) {
      shortcut = gather * shortcut;
      residual = left_multiply(gather, residual);
    }
    blocks.push_back(ResidualBlock{std::move(shortcut), std::move(residual)});
  }
  return ResNet(std::move(blocks));
}

bool structurally_equal(const Fnn& a, const Fnn& b) {
  if (a.depth() != b.depth()) return false;
  for (std::size_t k = 0; k < a.depth(); ++k) {
    const auto& la = a.layers()[k];
    const auto& lb = b.layers()[k];
    if (!(la.weights == lb.weights) || la.bias != lb.bias) return false;
  }
  return true;
}

bool structurally_equal(const ResNet& a, const ResNet& b) {
  if (a.length() != b.length()) return false;
  for (std::size_t i = 0; i < a.length(); ++i) {
    const auto& ba = a.blocks()[i];
    const auto& bb = b.blocks()[i];
    if (!(ba.shortcut == bb.shortcut) || !structurally_equal(ba.residual, bb.residual)) return false;
  }
  return true;
}

}  // namespace kolmonet
