#include "kolmonet/kernels.hpp"

#include <exception>

#include "kolmonet/error.hpp"

namespace kolmonet {

namespace {

/// Runs body(i) for i in [0, n) across threads and rethrows the first failure.
template <class Body>
void parallel_for(std::size_t n, Body body) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(kolmonet_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double realize_scalar(const ResNet& net, const Activation& act, const Vector& x) {
  return realize(net, act, x)[0];
}

double em_functional(const ScalarField& f0, const VectorField& drift, const Matrix& calA,
                     std::span<const double> x, double horizon, double delta, std::size_t m,
                     std::uint64_t seed) {
  const auto path = sample_brownian(x.size(), horizon, delta, m, seed);
  return f0(em_simulate(drift, calA, x, horizon, delta, path));
}

}  // namespace

std::vector<double> realize_scalar_batch(const ResNet& net, const Activation& act,
                                         std::span<const Vector> points) {
  if (net.output_dim() != 1) throw DimensionMismatch("scalar batch needs a network with one output");
  std::vector<double> out(points.size());
  parallel_for(points.size(), [&](std::size_t k) { out[k] = realize_scalar(net, act, points[k]); });
  return out;
}

std::vector<double> realize_scalar_batch_serial(const ResNet& net, const Activation& act,
                                                std::span<const Vector> points) {
  if (net.output_dim() != 1) throw DimensionMismatch("scalar batch needs a network with one output");
  std::vector<double> out(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) out[k] = realize_scalar(net, act, points[k]);
  return out;
}

std::vector<double> em_functional_samples(const ScalarField& f0, const VectorField& drift,
                                          const Matrix& calA, std::span<const double> x,
                                          double horizon, double delta, std::size_t samples,
                                          std::uint64_t seed) {
  std::vector<double> out(samples);
  parallel_for(samples, [&](std::size_t m) {
    out[m] = em_functional(f0, drift, calA, x, horizon, delta, m + 1, seed);
  });
  return out;
}

std::vector<double> em_functional_samples_serial(const ScalarField& f0, const VectorField& drift,
                                                 const Matrix& calA, std::span<const double> x,
                                                 double horizon, double delta, std::size_t samples,
                                                 std::uint64_t seed) {
  std::vector<double> out(samples);
  for (std::size_t m = 0; m < samples; ++m) out[m] = em_functional(f0, drift, calA, x, horizon, delta, m + 1, seed);
  return out;
}

}  // namespace kolmonet
