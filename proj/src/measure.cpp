#include "kolmonet/measure.hpp"

#include <sstream>

#include "kolmonet/error.hpp"
#include "kolmonet/rng.hpp"

namespace kolmonet {

namespace {
constexpr std::uint64_t kMeasureTag = 0x6E75'5F73'616D'706CULL;  // "nu_sampl"
}

SamplingMeasure SamplingMeasure::uniform(double lower, double upper) {
  if (!(lower < upper)) throw InvalidArgument("uniform measure needs lower < upper");
  return SamplingMeasure{Kind::uniform, lower, upper};
}

Vector SamplingMeasure::sample(std::size_t d, std::uint64_t seed, std::size_t index) const {
  const CounterStream stream(stream_key({seed, d, kMeasureTag, index}));
  Vector x(d);
  if (kind == Kind::gaussian) {
    stream.fill_normal(x);
  } else {
    for (std::size_t j = 0; j < d; ++j) x[j] = lower + (upper - lower) * stream.uniform(j);
  }
  return x;
}

std::string SamplingMeasure::describe() const {
  if (kind == Kind::gaussian) return "gaussian";
  std::ostringstream os;
  os << "uniform[" << lower << "," << upper << "]";
  return os.str();
}

}  // namespace kolmonet
