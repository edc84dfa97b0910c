#include "kolmonet/activation.hpp"

#include <cmath>
#include <utility>

#include "kolmonet/error.hpp"

namespace kolmonet {

namespace {

const char* kind_name(Activation::Kind kind) {
  switch (kind) {
    case Activation::Kind::identity: return "identity";
    case Activation::Kind::relu: return "relu";
    case Activation::Kind::tanh: return "tanh";
    case Activation::Kind::swish: return "swish";
    case Activation::Kind::custom: return "custom";
  }
  return "custom";
}

}  // namespace

Activation::Activation(Kind kind) : kind_(kind), name_(kind_name(kind)) {}

Activation Activation::custom(std::string name, std::function<double(double)> fn) {
  if (!fn) throw InvalidArgument("custom activation without a callable");
  Activation a(Kind::custom);
  a.name_ = std::move(name);
  a.fn_ = std::move(fn);
  return a;
}

Activation Activation::from_name(std::string_view name) {
  if (name == "identity") return identity();
  if (name == "relu") return relu();
  if (name == "tanh") return tanh();
  if (name == "swish") return swish();
  throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

double Activation::operator()(double x) const {
  switch (kind_) {
    case Kind::identity: return x;
    case Kind::relu: return x > 0.0 ? x : 0.0;
    case Kind::tanh: return std::tanh(x);
    case Kind::swish: return x / (1.0 + std::exp(-x));
    case Kind::custom: return fn_(x);
  }
  return x;
}

void Activation::apply_inplace(std::span<double> xs) const {
  if (kind_ == Kind::identity) return;
  for (double& x : xs) x = (*this)(x);
}

}  // namespace kolmonet
