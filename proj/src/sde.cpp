#include "kolmonet/sde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kolmonet/error.hpp"
#include "kolmonet/kernels.hpp"
#include "kolmonet/rng.hpp"

namespace kolmonet {

namespace {

constexpr std::uint64_t kBootstrapTag = 0x626F'6F74'7374'7270ULL;  // "bootstrp"
constexpr std::size_t kResamples = 1000;

bool is_diagonal(const Matrix& g) {
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.cols(); ++c) {
      if (r != c && g.entry(r, c) != 0.0) return false;
    }
  }
  return true;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

/// Draws `resamples` bootstrap replicates of `stat` over index resamples of `values`.
template <class Stat>
std::vector<double> bootstrap(std::span<const double> values, std::size_t resamples, std::uint64_t seed,
                              Stat stat) {
  const std::size_t n = values.size();
  std::vector<double> reps(resamples);
  std::vector<double> draw(n);
  for (std::size_t r = 0; r < resamples; ++r) {
    const CounterStream stream(stream_key({seed, kBootstrapTag, r}));
    for (std::size_t k = 0; k < n; ++k) {
      const auto idx = std::min(n - 1, static_cast<std::size_t>(stream.uniform(k) * static_cast<double>(n)));
      draw[k] = values[idx];
    }
    reps[r] = stat(std::span<const double>(draw));
  }
  return reps;
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

VectorField as_field(const Fnn& net, const Activation& act) {
  return [net, act](std::span<const double> x) { return realize(net, act, x); };
}

ScalarField as_scalar_field(const Fnn& net, const Activation& act) {
  if (net.output_dim() != 1) throw DimensionMismatch("scalar field needs a network with one output");
  return [net, act](std::span<const double> x) { return realize(net, act, x)[0]; };
}

Vector em_simulate(const VectorField& drift, const Matrix& calA, std::span<const double> x,
                   double horizon, double delta, const BrownianPath& path) {
  const std::size_t d = x.size();
  if (calA.rows() != d || calA.cols() != d) throw DimensionMismatch("noise matrix must be d x d");
  const TimeGrid grid = TimeGrid::make(delta, horizon);
  if (path.increments.size() != grid.intervals()) {
    throw DimensionMismatch("Brownian path has " + std::to_string(path.increments.size()) +
                            " increments, grid has " + std::to_string(grid.intervals()));
  }
  Vector y(x.begin(), x.end());
  for (std::size_t i = 0; i < grid.intervals(); ++i) {
    if (path.increments[i].size() != d) throw DimensionMismatch("increment dimension differs from x");
    const Vector f = drift(y);
    if (f.size() != d) throw DimensionMismatch("drift output dimension differs from x");
    const double h = grid.duration(i);
    Vector next = y;
    for (std::size_t j = 0; j < d; ++j) next[j] += h * f[j];
    calA.apply_add(path.increments[i], next);
    y = std::move(next);
  }
  return y;
}

McEstimate mean_and_error(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw InvalidArgument("a standard error needs at least two values");
  const double mean = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n))};
}

McEstimate mc_estimate_u(const ScalarField& f0, const VectorField& drift, const Matrix& calA,
                         std::span<const double> x, double horizon, double delta, std::size_t samples,
                         std::uint64_t seed) {
  if (samples < 2) throw InvalidArgument("Monte Carlo estimate needs M >= 2");
  const auto values = em_functional_samples(f0, drift, calA, x, horizon, delta, samples, seed);
  return mean_and_error(values);
}

ReferenceSolution ReferenceSolution::affine_no_drift(Vector c, double b) {
  ReferenceSolution r;
  r.kind = Kind::affine_no_drift;
  r.c = std::move(c);
  r.b = b;
  return r;
}

ReferenceSolution ReferenceSolution::affine_linear_drift(Vector c, double b, Matrix g) {
  if (g.rows() != c.size() || g.cols() != c.size()) throw DimensionMismatch("G must be d x d");
  ReferenceSolution r = affine_no_drift(std::move(c), b);
  r.kind = Kind::affine_linear_drift;
  r.drift = std::move(g);
  return r;
}

ReferenceSolution ReferenceSolution::relu_gaussian_1d(double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be >= 0");
  ReferenceSolution r;
  r.kind = Kind::relu_gaussian_1d;
  r.sigma = sigma;
  return r;
}

ReferenceSolution ReferenceSolution::discrete_affine_recursion(Vector c, double b, Matrix g, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("delta must lie in (0, 1]");
  ReferenceSolution r = affine_linear_drift(std::move(c), b, std::move(g));
  r.kind = Kind::discrete_affine_recursion;
  r.delta = delta;
  return r;
}

double closed_form(const ReferenceSolution& ref, double horizon, std::span<const double> x) {
  using Kind = ReferenceSolution::Kind;
  if (!(horizon >= 0.0)) throw InvalidArgument("horizon must be >= 0");
  if (ref.kind == Kind::relu_gaussian_1d) {
    if (x.size() != 1) throw DimensionMismatch("relu_gaussian_1d is one-dimensional");
    const double s = ref.sigma * std::sqrt(horizon);
    if (s == 0.0) return std::max(x[0], 0.0);
    return x[0] * normal_cdf(x[0] / s) + s * normal_pdf(x[0] / s);
  }
  if (x.size() != ref.c.size()) throw DimensionMismatch("reference dimension differs from x");
  switch (ref.kind) {
    case Kind::affine_no_drift:
      return dot(ref.c, x) + ref.b;
    case Kind::affine_linear_drift: {
      if (!is_diagonal(ref.drift)) throw UnsupportedKind("continuous reference needs a diagonal drift matrix");
      double s = ref.b;
      for (std::size_t j = 0; j < x.size(); ++j) s += ref.c[j] * std::exp(ref.drift.entry(j, j) * horizon) * x[j];
      return s;
    }
    case Kind::discrete_affine_recursion: {
      const TimeGrid grid = TimeGrid::make(ref.delta, horizon);
      Vector mu(x.begin(), x.end());
      for (std::size_t i = 0; i < grid.intervals(); ++i) {
        const double h = grid.duration(i);
        Vector next = mu;
        const Vector gm = ref.drift.apply(mu);
        for (std::size_t j = 0; j < mu.size(); ++j) next[j] += h * gm[j];
        mu = std::move(next);
      }
      return dot(ref.c, mu) + ref.b;
    }
    default:
      throw UnsupportedKind("unknown reference kind");
  }
}

const char* kind_name(ReferenceSolution::Kind kind) {
  using Kind = ReferenceSolution::Kind;
  switch (kind) {
    case Kind::affine_no_drift: return "affine_no_drift";
    case Kind::affine_linear_drift: return "affine_linear_drift";
    case Kind::relu_gaussian_1d: return "relu_gaussian_1d";
    case Kind::discrete_affine_recursion: return "discrete_affine_recursion";
  }
  return "unknown";
}

ReferenceSolution::Kind reference_kind_from_name(const std::string& name) {
  using Kind = ReferenceSolution::Kind;
  for (auto k : {Kind::affine_no_drift, Kind::affine_linear_drift, Kind::relu_gaussian_1d,
                 Kind::discrete_affine_recursion}) {
    if (name == kind_name(k)) return k;
  }
  throw UnsupportedKind("unknown reference kind '" + name + "'");
}

double bootstrap_standard_error(std::span<const double> values, std::size_t resamples, std::uint64_t seed) {
  if (values.size() < 2 || resamples < 2) throw InvalidArgument("bootstrap needs >= 2 values and resamples");
  const auto reps = bootstrap(values, resamples, seed, mean_of);
  const double m = mean_of(reps);
  double ss = 0.0;
  for (double r : reps) ss += (r - m) * (r - m);
  return std::sqrt(ss / static_cast<double>(resamples - 1));
}

LpError lp_norm(std::span<const double> values, double p, std::size_t resamples, std::uint64_t seed) {
  if (!(p > 0.0)) throw InvalidArgument("p must be positive");
  if (values.empty()) throw InvalidArgument("no values");
  auto norm = [p](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x), p);
    return std::pow(s / static_cast<double>(v.size()), 1.0 / p);
  };
  LpError out{norm(values), 0.0};
  if (values.size() < 2) return out;
  auto reps = bootstrap(values, resamples, seed, norm);
  std::sort(reps.begin(), reps.end());
  const auto at = [&](double q) {
    const auto k = static_cast<std::size_t>(q * static_cast<double>(reps.size() - 1));
    return reps[k];
  };
  out.halfwidth = 0.5 * (at(0.975) - at(0.025));
  return out;
}

LpError lp_error(const ResNet& net, const Activation& act, const ScalarField& ref,
                 const SamplingMeasure& nu, double p, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 100) throw InvalidArgument("lp_error needs at least 100 samples");
  if (net.output_dim() != 1) throw DimensionMismatch("lp_error needs a scalar network");
  std::vector<Vector> points(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) points[k] = nu.sample(net.input_dim(), seed, k);
  auto diff = realize_scalar_batch(net, act, points);
  for (std::size_t k = 0; k < n_samples; ++k) diff[k] -= ref(points[k]);
  return lp_norm(diff, p, kResamples, seed);
}

}  // namespace kolmonet
