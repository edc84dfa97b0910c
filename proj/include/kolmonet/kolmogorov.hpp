#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kolmonet/activation.hpp"
#include "kolmonet/fnn.hpp"
#include "kolmonet/measure.hpp"
#include "kolmonet/resnet.hpp"
#include "kolmonet/wide.hpp"

namespace kolmonet {

/// Approximating network as a function of the accuracy parameter delta.
using FnnFamily = std::function<Fnn(double delta)>;

/**
 * One Kolmogorov problem instance in dimension d.
 *
 * `diffusion` is the constant matrix A; the SDE noise uses sqrt(2A).
 * `phi1` approximates the drift (d -> d), `phi0` the initial value (d -> 1).
 */
struct ProblemSpec {
  std::size_t d = 1;
  double horizon = 1.0;
  double kappa = 1.0;
  double eta = 1.0;
  double p = 2.0;
  Matrix diffusion;
  FnnFamily phi0;
  FnnFamily phi1;
  SamplingMeasure nu;
  Activation activation = Activation::relu();
  /// Norm of the true drift at the origin; when absent, |R(phi1(1))(0)| stands in.
  std::optional<double> f1_norm_at_0;

  double iota() const noexcept { return kappa > 1.0 ? kappa : 1.0; }

  /// Checks scalar ranges, the diffusion matrix and the network shapes at delta = 1.
  void validate() const;
};

/// delta^2 * floor(t / delta^2 + 1e-9)
double chi(double delta, double t);

/// Uniform grid of step delta^2 on [0, chi(T)] followed by the remainder [chi(T), T].
struct TimeGrid {
  double delta = 1.0;
  double horizon = 0.0;
  std::size_t full_steps = 0;  // N = chi(T) / delta^2
  double final_duration = 0.0;  // T - chi(T), clamped at 0

  static TimeGrid make(double delta, double horizon);

  double step() const noexcept { return delta * delta; }
  std::size_t intervals() const noexcept { return full_steps + 1; }
  double duration(std::size_t i) const noexcept { return i < full_steps ? step() : final_duration; }
};

/// Raw Brownian increments for sample m on the grid of (delta, horizon). Not yet scaled by sqrt(2A).
struct BrownianPath {
  std::size_t sample = 0;
  std::uint64_t seed = 0;
  double delta = 1.0;
  double horizon = 0.0;
  std::vector<Vector> increments;
};

/// Increment i, coordinate j is normal variate j of the stream keyed by (seed, d, m, i),
/// scaled by the square root of the interval length.
BrownianPath sample_brownian(std::size_t d, double horizon, double delta, std::size_t m,
                             std::uint64_t seed);

/// Copy of phi1 whose output layer becomes (duration W_L, duration B_L + noise).
Fnn make_em_block(const Fnn& phi1, double duration, std::span<const double> noise);

/// Euler-Maruyama ResNet: N+1 blocks, identity shortcuts, block i driven by calA * increment i.
ResNet build_em_resnet(const Fnn& phi1, double delta, double horizon, const BrownianPath& path,
                       const Matrix& calA);

struct ChainLine {
  std::string label;
  Wide value;
};

/// Exponents of d and epsilon in a monomial c * d^a * eps^b.
struct Monomial {
  Wide coef = 1;
  double d_exp = 0.0;
  double eps_exp = 0.0;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  Monomial pow(double k) const;
};

struct ComplexityReport {
  std::size_t d = 0;
  double epsilon = 0.0;  // 0 when (M, delta) were user-chosen
  Wide p_phi0 = 0;
  Wide p_phi1 = 0;
  Wide steps = 0;        // N + 1
  Wide p_psi_block = 0;  // per-sample EM ResNet
  Wide p_varphi = 0;     // per-sample network with phi0 appended
  Wide p_Psi = 0;        // estimator, exact
  Wide bound_g_h = 0;    // M^2 * p_varphi
  std::optional<Wide> bound_final;
  Wide M = 0;
  Wide delta = 0;
  bool user_scaled = true;
  bool materializable = true;
  std::vector<ChainLine> chain;
  std::optional<Monomial> final_monomial;
};

/// Per-sample networks varphi_m = append(phi0, psi_m), m = 1..M.
std::vector<ResNet> build_sample_networks(const ProblemSpec& spec, double delta, std::size_t samples,
                                          std::uint64_t seed);

struct Estimator {
  ResNet network;
  ComplexityReport report;
};

/// Average of the M per-sample networks as one ResNet, with its exact parameter accounting.
Estimator build_estimator(const ProblemSpec& spec, double delta, std::size_t samples,
                          std::uint64_t seed);

/// Parameter counts predicted from shapes alone for a user-chosen (delta, M).
ComplexityReport predict_complexity(const ProblemSpec& spec, double delta, const Wide& samples);

struct McCount {
  Wide raw;    // the defining expression
  Wide value;  // max(1, ceil(raw))
  Wide upper_bound;
  bool fits_u64 = false;
};

McCount mc_count(const ProblemSpec& spec, double epsilon);

struct StepSize {
  Wide value;
  Wide lower_bound;
};

StepSize step_size(const ProblemSpec& spec, double epsilon, double f1_norm_at_0);

/// Norm used for the drift at the origin: the configured value or |R(phi1(1))(0)|.
double drift_norm_at_origin(const ProblemSpec& spec);

/// Closed-form final bound C * d^e_d * eps^-(kappa+6) assembled from its factor monomials.
Monomial final_bound_monomial(const ProblemSpec& spec);

/// d exponent of the final bound as a direct formula.
double final_bound_d_exponent(double kappa, double p, double eta);

/**
 * Formula-scaled accounting at accuracy epsilon. Evaluates every line of the
 * bound chain without building networks and checks each is <= the next.
 * Throws AssumptionViolated when P(phi0) + P(phi1) > kappa d^kappa delta^-kappa at the formula step size.
 * `max_parameters` decides the materializable flag.
 */
ComplexityReport complexity_budget(const ProblemSpec& spec, double epsilon,
                                   const Wide& max_parameters = Wide(5e7));

/// True when every chain line is <= the following one.
bool chain_monotone(const ComplexityReport& report);

}  // namespace kolmonet
