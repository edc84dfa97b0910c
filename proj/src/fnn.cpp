#include "kolmonet/fnn.hpp"

#include <string>
#include <utility>

#include "kolmonet/error.hpp"

namespace kolmonet {

Fnn::Fnn(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw DimensionMismatch("an FNN needs at least one layer");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& layer = layers_[k];
    const auto where = "layer " + std::to_string(k + 1);
    if (layer.weights.rows() == 0 || layer.weights.cols() == 0) {
      throw DimensionMismatch(where + " has a zero-width weight matrix");
    }
    if (layer.bias.size() != layer.weights.rows()) {
      throw DimensionMismatch(where + ": bias length " + std::to_string(layer.bias.size()) +
                              " != weight rows " + std::to_string(layer.weights.rows()));
    }
    if (k > 0 && layer.weights.cols() != layers_[k - 1].weights.rows()) {
      throw DimensionMismatch(where + ": weight columns " + std::to_string(layer.weights.cols()) +
                              " != previous layer width " +
                              std::to_string(layers_[k - 1].weights.rows()));
    }
  }
}

std::vector<std::size_t> Fnn::architecture() const {
  std::vector<std::size_t> arch;
  arch.reserve(layers_.size() + 1);
  arch.push_back(input_dim());
  for (const auto& layer : layers_) arch.push_back(layer.weights.rows());
  return arch;
}

std::size_t Fnn::width(std::size_t n) const {
  if (n == 0) return input_dim();
  if (n > layers_.size()) return 0;
  return layers_[n - 1].weights.rows();
}

ParamCount Fnn::complexity() const {
  ParamCount total = 0;
  for (const auto& layer : layers_) {
    total = checked_add(total, checked_mul(layer.weights.rows(), layer.weights.cols() + 1));
  }
  return total;
}

FnnMetrics metrics(const Fnn& net) {
  return FnnMetrics{net.depth(), net.input_dim(), net.output_dim(), net.architecture(),
                    net.complexity()};
}

Vector realize(const Fnn& net, const Activation& act, std::span<const double> x) {
  if (x.size() != net.input_dim()) {
    throw DimensionMismatch("FNN input has length " + std::to_string(x.size()) + ", expected " +
                            std::to_string(net.input_dim()));
  }
  const auto& layers = net.layers();
  Vector current(x.begin(), x.end());
  for (std::size_t k = 0; k < layers.size(); ++k) {
    Vector next = layers[k].bias;
    layers[k].weights.apply_add(current, next);
    if (k + 1 < layers.size()) act.apply_inplace(next);
    current = std::move(next);
  }
  return current;
}

Fnn compose(const Fnn& outer, const Fnn& inner) {
  if (outer.input_dim() != inner.output_dim()) {
    throw DimensionMismatch("composition: outer input " + std::to_string(outer.input_dim()) +
                            " != inner output " + std::to_string(inner.output_dim()));
  }
  const auto& in = inner.layers();
  const auto& out = outer.layers();
  std::vector<Layer> layers(in.begin(), in.end() - 1);
  const auto& last = in.back();
  const auto& first = out.front();
  Vector fused_bias = first.bias;
  first.weights.apply_add(last.bias, fused_bias);
  layers.push_back(Layer{first.weights * last.weights, std::move(fused_bias)});
  layers.insert(layers.end(), out.begin() + 1, out.end());
  return Fnn(std::move(layers));
}

Fnn parallelize(std::span<const Fnn> nets) {
  if (nets.empty()) throw InvalidArgument("parallelization of an empty list");
  const std::size_t depth = nets.front().depth();
  for (const auto& net : nets) {
    if (net.depth() != depth) {
      throw DepthMismatch("parallelization needs equal depths, got " + std::to_string(depth) +
                          " and " + std::to_string(net.depth()));
    }
  }
  if (nets.size() == 1) return nets.front();
  std::vector<Layer> layers;
  layers.reserve(depth);
  std::vector<Matrix> weights(nets.size());
  std::vector<Vector> biases(nets.size());
  for (std::size_t k = 0; k < depth; ++k) {
    for (std::size_t j = 0; j < nets.size(); ++j) {
      weights[j] = nets[j].layers()[k].weights;
      biases[j] = nets[j].layers()[k].bias;
    }
    layers.push_back(Layer{Matrix::block_diagonal(weights), concat(biases)});
  }
  return Fnn(std::move(layers));
}

Fnn left_multiply(const Matrix& m, const Fnn& net) {
  if (m.cols() != net.output_dim()) {
    throw DimensionMismatch("left multiplication: matrix has " + std::to_string(m.cols()) +
                            " columns, network output is " + std::to_string(net.output_dim()));
  }
  std::vector<Layer> layers = net.layers();
  auto& last = layers.back();
  last = Layer{m * last.weights, m.apply(last.bias)};
  return Fnn(std::move(layers));
}

Fnn right_multiply(const Fnn& net, const Matrix& m) {
  if (m.rows() != net.input_dim()) {
    throw DimensionMismatch("right multiplication: matrix has " + std::to_string(m.rows()) +
                            " rows, network input is " + std::to_string(net.input_dim()));
  }
  std::vector<Layer> layers = net.layers();
  layers.front().weights = layers.front().weights * m;
  return Fnn(std::move(layers));
}

Fnn weighted_sum(std::span<const double> weights, std::span<const Fnn> nets) {
  if (nets.empty() || weights.size() != nets.size()) {
    throw InvalidArgument("weighted sum needs one weight per network and at least one network");
  }
  const auto arch = nets.front().architecture();
  for (const auto& net : nets) {
    if (net.architecture() != arch) throw ArchMismatch("weighted sum needs identical architectures");
  }
  const std::size_t in = arch.front();
  const std::size_t out = arch.back();
  const auto parallel = parallelize(nets);
  const auto spread = Matrix::stacked_identity(in, nets.size());
  const auto gather = Matrix::weighted_identity_row(out, weights);
  return left_multiply(gather, right_multiply(parallel, spread));
}

}  // namespace kolmonet
