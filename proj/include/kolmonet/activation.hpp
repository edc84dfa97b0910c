#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace kolmonet {

/**
 * Scalar activation applied componentwise to hidden layers.
 *
 * Built-in kinds are stateless. A custom activation wraps an arbitrary scalar
 * callable; it is invoked from worker threads by the batched kernels, so the
 * callable must tolerate concurrent calls.
 */
class Activation {
 public:
  enum class Kind { identity, relu, tanh, swish, custom };

  Activation() = default;

  static Activation identity() { return Activation(Kind::identity); }
  static Activation relu() { return Activation(Kind::relu); }
  static Activation tanh() { return Activation(Kind::tanh); }
  static Activation swish() { return Activation(Kind::swish); }
  static Activation custom(std::string name, std::function<double(double)> fn);

  /// Parses "identity", "relu", "tanh" or "swish". Throws InvalidArgument otherwise.
  static Activation from_name(std::string_view name);

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  double operator()(double x) const;
  void apply_inplace(std::span<double> xs) const;

 private:
  explicit Activation(Kind kind);

  Kind kind_ = Kind::identity;
  std::string name_ = "identity";
  std::function<double(double)> fn_;
};

}  // namespace kolmonet
