#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kolmonet/sde.hpp"

namespace kolmonet {

// Hot loops in two flavours: OpenMP across independent items, and a plain
// serial reference. Both return identical results item by item.

std::vector<double> realize_scalar_batch(const ResNet& net, const Activation& act,
                                         std::span<const Vector> points);
std::vector<double> realize_scalar_batch_serial(const ResNet& net, const Activation& act,
                                                std::span<const Vector> points);

/// f0(Y_T^m(x)) for m = 1..M.
std::vector<double> em_functional_samples(const ScalarField& f0, const VectorField& drift,
                                          const Matrix& calA, std::span<const double> x,
                                          double horizon, double delta, std::size_t samples,
                                          std::uint64_t seed);
std::vector<double> em_functional_samples_serial(const ScalarField& f0, const VectorField& drift,
                                                 const Matrix& calA, std::span<const double> x,
                                                 double horizon, double delta, std::size_t samples,
                                                 std::uint64_t seed);

}  // namespace kolmonet
