#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "kolmonet/kolmogorov.hpp"

namespace kolmonet {

using VectorField = std::function<Vector(std::span<const double>)>;
using ScalarField = std::function<double(std::span<const double>)>;

/// Drift / initial-value maps backed by a network realization.
VectorField as_field(const Fnn& net, const Activation& act);
ScalarField as_scalar_field(const Fnn& net, const Activation& act);

/// Explicit loop y <- y + duration * drift(y) + calA * dW over all grid intervals.
Vector em_simulate(const VectorField& drift, const Matrix& calA, std::span<const double> x,
                   double horizon, double delta, const BrownianPath& path);

struct McEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Sample mean and standard error of values.
McEstimate mean_and_error(std::span<const double> values);

/// Mean of f0(Y_T^m(x)) over paths m = 1..M of `seed`, with its standard error. M >= 2.
McEstimate mc_estimate_u(const ScalarField& f0, const VectorField& drift, const Matrix& calA,
                         std::span<const double> x, double horizon, double delta, std::size_t samples,
                         std::uint64_t seed);

/**
 * Exact solutions for special coefficients.
 *
 * affine_no_drift:           <c, x> + b
 * affine_linear_drift:       <c, e^{GT} x> + b, G diagonal
 * relu_gaussian_1d:          E[max(x + sigma W_T, 0)]
 * discrete_affine_recursion: <c, mu_T> + b with mu <- (I + h G) mu over the grid of `delta`
 */
struct ReferenceSolution {
  enum class Kind { affine_no_drift, affine_linear_drift, relu_gaussian_1d, discrete_affine_recursion };

  Kind kind = Kind::affine_no_drift;
  Vector c;
  double b = 0.0;
  Matrix drift;  // G
  double sigma = 1.0;
  double delta = 1.0;

  static ReferenceSolution affine_no_drift(Vector c, double b);
  static ReferenceSolution affine_linear_drift(Vector c, double b, Matrix g);
  static ReferenceSolution relu_gaussian_1d(double sigma);
  static ReferenceSolution discrete_affine_recursion(Vector c, double b, Matrix g, double delta);
};

double closed_form(const ReferenceSolution& ref, double horizon, std::span<const double> x);

const char* kind_name(ReferenceSolution::Kind kind);
ReferenceSolution::Kind reference_kind_from_name(const std::string& name);

/// Standard error of the mean by bootstrap resampling.
double bootstrap_standard_error(std::span<const double> values, std::size_t resamples,
                                std::uint64_t seed);

struct LpError {
  double estimate = 0.0;
  double halfwidth = 0.0;  // half the 95% percentile-bootstrap interval
};

/// (mean |values|^p)^(1/p) with a percentile-bootstrap half-width.
LpError lp_norm(std::span<const double> values, double p, std::size_t resamples, std::uint64_t seed);

/// Monte Carlo L^p(nu) norm of R(net) - ref over n_samples points drawn from nu.
LpError lp_error(const ResNet& net, const Activation& act, const ScalarField& ref,
                 const SamplingMeasure& nu, double p, std::size_t n_samples, std::uint64_t seed);

}  // namespace kolmonet
