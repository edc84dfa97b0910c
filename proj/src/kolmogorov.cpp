#include "kolmonet/kolmogorov.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>

#include "kolmonet/error.hpp"
#include "kolmonet/linalg.hpp"
#include "kolmonet/rng.hpp"

namespace kolmonet {

namespace mp = boost::multiprecision;

std::string to_string(const Wide& x, int digits) {
  return x.str(digits, std::ios_base::scientific);
}

namespace {

constexpr double kFloorGuard = 1e-9;
constexpr std::uint64_t kPathTag = 0x6272'6F77'6E69'616EULL;  // "brownian"

void check_delta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1], got " + std::to_string(delta));
  }
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw InvalidArgument("epsilon must lie in (0, 1], got " + std::to_string(epsilon));
  }
}

/// Formulas need p >= 2; smaller p is handled through p = 2 and Hoelder.
double effective_p(const ProblemSpec& spec) { return std::max(spec.p, 2.0); }

Wide wpow(const Wide& b, const Wide& e) { return mp::pow(b, e); }

Wide wmax(const Wide& a, const Wide& b) { return a < b ? b : a; }

Wide wmin(const Wide& a, const Wide& b) { return a < b ? a : b; }

/// Exact complexity of the estimator when each sample network is `steps` blocks of
/// arch1 followed by one block of arch0.
Wide estimator_complexity(const std::vector<std::size_t>& arch1, const std::vector<std::size_t>& arch0,
                          const Wide& steps, const Wide& u) {
  const Wide ends = weighted_sum_complexity<Wide>({arch1, arch0}, u);
  const Wide middle = weighted_sum_complexity<Wide>({arch1, arch1, arch1}, u) -
                      weighted_sum_complexity<Wide>({arch1, arch1}, u);
  return ends + (steps - 1) * middle;
}

bool fits_u64(const Wide& x) {
  return x >= 0 && x <= Wide(std::numeric_limits<std::uint64_t>::max());
}

}  // namespace

void ProblemSpec::validate() const {
  if (d == 0) throw InvalidArgument("dimension must be positive");
  if (!(horizon > 0.0)) throw InvalidArgument("horizon T must be positive");
  if (!(kappa >= 0.0)) throw InvalidArgument("kappa must be >= 0");
  if (!(eta >= 1.0)) throw InvalidArgument("eta must be >= 1");
  if (!(p > 0.0)) throw InvalidArgument("p must be positive");
  if (diffusion.rows() != d || diffusion.cols() != d) {
    throw DimensionMismatch("diffusion matrix must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  (void)sqrt_spd(diffusion);
  if (!phi0 || !phi1) throw InvalidArgument("both approximating families are required");
  const Fnn f0 = phi0(1.0);
  const Fnn f1 = phi1(1.0);
  if (f1.input_dim() != d || f1.output_dim() != d) {
    throw DimensionMismatch("drift network must map R^" + std::to_string(d) + " to itself");
  }
  if (f0.input_dim() != d || f0.output_dim() != 1) {
    throw DimensionMismatch("initial-value network must map R^" + std::to_string(d) + " to R");
  }
}

double chi(double delta, double t) {
  check_delta(delta);
  if (!(t >= 0.0)) throw InvalidArgument("time must be >= 0");
  const double step = delta * delta;
  return step * std::floor(t / step + kFloorGuard);
}

TimeGrid TimeGrid::make(double delta, double horizon) {
  TimeGrid g;
  g.delta = delta;
  g.horizon = horizon;
  const double grid_end = chi(delta, horizon);
  g.full_steps = static_cast<std::size_t>(std::llround(grid_end / g.step()));
  g.final_duration = std::max(0.0, horizon - grid_end);
  return g;
}

BrownianPath sample_brownian(std::size_t d, double horizon, double delta, std::size_t m,
                             std::uint64_t seed) {
  const TimeGrid grid = TimeGrid::make(delta, horizon);
  BrownianPath path{m, seed, delta, horizon, {}};
  path.increments.reserve(grid.intervals());
  for (std::size_t i = 0; i < grid.intervals(); ++i) {
    Vector inc(d);
    const CounterStream stream(stream_key({seed, d, m, i + 1, kPathTag}));
    stream.fill_normal(inc);
    const double scale = std::sqrt(grid.duration(i));
    for (auto& v : inc) v *= scale;
    path.increments.push_back(std::move(inc));
  }
  return path;
}

Fnn make_em_block(const Fnn& phi1, double duration, std::span<const double> noise) {
  if (noise.size() != phi1.output_dim()) {
    throw DimensionMismatch("noise has length " + std::to_string(noise.size()) + ", drift output is " +
                            std::to_string(phi1.output_dim()));
  }
  if (!(duration >= 0.0)) throw InvalidArgument("block duration must be >= 0");
  std::vector<Layer> layers = phi1.layers();
  Layer& last = layers.back();
  last.weights = last.weights.scaled(duration);
  for (std::size_t i = 0; i < last.bias.size(); ++i) last.bias[i] = duration * last.bias[i] + noise[i];
  return Fnn(std::move(layers));
}

ResNet build_em_resnet(const Fnn& phi1, double delta, double horizon, const BrownianPath& path,
                       const Matrix& calA) {
  const std::size_t d = phi1.input_dim();
  if (phi1.output_dim() != d) throw DimensionMismatch("drift network must be square");
  if (calA.rows() != d || calA.cols() != d) throw DimensionMismatch("noise matrix must be d x d");
  const TimeGrid grid = TimeGrid::make(delta, horizon);
  if (path.delta != delta || path.horizon != horizon || path.increments.size() != grid.intervals()) {
    throw DimensionMismatch("Brownian path does not match the time grid");
  }
  std::vector<ResidualBlock> blocks;
  blocks.reserve(grid.intervals());
  for (std::size_t i = 0; i < grid.intervals(); ++i) {
    const Vector noise = calA.apply(path.increments[i]);
    blocks.push_back({Matrix::identity(d), make_em_block(phi1, grid.duration(i), noise)});
  }
  return ResNet(std::move(blocks));
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  return {a.coef * b.coef, a.d_exp + b.d_exp, a.eps_exp + b.eps_exp};
}

Monomial Monomial::pow(double k) const { return {wpow(coef, Wide(k)), d_exp * k, eps_exp * k}; }

std::vector<ResNet> build_sample_networks(const ProblemSpec& spec, double delta, std::size_t samples,
                                          std::uint64_t seed) {
  check_delta(delta);
  if (samples == 0) throw InvalidArgument("sample count must be >= 1");
  const Fnn phi0 = spec.phi0(delta);
  const Fnn phi1 = spec.phi1(delta);
  const Matrix calA = sqrt_spd(spec.diffusion);

  std::vector<std::optional<ResNet>> built(samples);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t m = 0; m < static_cast<std::ptrdiff_t>(samples); ++m) {
    try {
      const auto path = sample_brownian(spec.d, spec.horizon, delta, static_cast<std::size_t>(m) + 1, seed);
      built[m] = append(phi0, build_em_resnet(phi1, delta, spec.horizon, path, calA));
    } catch (...) {
#pragma omp critical(kolmonet_build_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ResNet> nets;
  nets.reserve(samples);
  for (auto& n : built) nets.push_back(std::move(*n));
  return nets;
}

ComplexityReport predict_complexity(const ProblemSpec& spec, double delta, const Wide& samples) {
  const Fnn phi0 = spec.phi0(delta);
  const Fnn phi1 = spec.phi1(delta);
  const TimeGrid grid = TimeGrid::make(delta, spec.horizon);
  const Wide d = spec.d;

  ComplexityReport r;
  r.d = spec.d;
  r.p_phi0 = Wide(phi0.complexity());
  r.p_phi1 = Wide(phi1.complexity());
  r.steps = Wide(grid.intervals());
  r.p_psi_block = (r.p_phi1 + d * d) * r.steps;
  r.p_varphi = r.p_psi_block + r.p_phi0 + d;
  r.p_Psi = estimator_complexity(phi1.architecture(), phi0.architecture(), r.steps, samples);
  r.bound_g_h = samples * samples * r.p_varphi;
  r.M = samples;
  r.delta = delta;
  return r;
}

Estimator build_estimator(const ProblemSpec& spec, double delta, std::size_t samples,
                          std::uint64_t seed) {
  std::vector<ResNet> nets = build_sample_networks(spec, delta, samples, seed);
  const std::vector<double> weights(samples, 1.0 / static_cast<double>(samples));
  ResNet network = weighted_sum(weights, nets);

  ComplexityReport report = predict_complexity(spec, delta, Wide(samples));
  const Wide per_sample(nets.front().complexity());
  const Wide psi_only(per_sample - Wide(nets.front().blocks().back().residual.complexity()) -
                      Wide(nets.front().blocks().back().shortcut.entry_count()));
  if (per_sample != report.p_varphi || psi_only != report.p_psi_block) {
    throw std::logic_error("per-sample network count disagrees with its formula");
  }
  const Wide exact(network.complexity());
  if (exact != report.p_Psi) throw std::logic_error("estimator count disagrees with its shape formula");
  if (exact > report.bound_g_h) throw std::logic_error("estimator count exceeds M^2 * P(varphi)");
  return {std::move(network), std::move(report)};
}

double drift_norm_at_origin(const ProblemSpec& spec) {
  if (spec.f1_norm_at_0) return *spec.f1_norm_at_0;
  const Vector zero(spec.d, 0.0);
  return norm2(realize(spec.phi1(1.0), spec.activation, zero));
}

McCount mc_count(const ProblemSpec& spec, double epsilon) {
  check_epsilon(epsilon);
  const Wide k = spec.kappa;
  const Wide i = spec.iota();
  const Wide p = effective_p(spec);
  const Wide T = spec.horizon;
  const Wide eta = spec.eta;
  const Wide d = spec.d;
  const Wide eps = epsilon;
  const Wide kdk = k * wpow(d, k);

  const Wide lead = wpow(Wide(2), k + 4) * p * kdk * mp::exp(k * k * T) / eps;
  const Wide inner = 1 + wpow(kdk * T + mp::sqrt(2 * (p * i - 1) * kdk * T), p * k) + eta * wpow(d, eta);
  McCount out;
  out.raw = lead * lead * wpow(inner, 2 / p);
  out.value = wmax(Wide(1), mp::ceil(out.raw));
  out.upper_bound = wpow(Wide(2), 2 * (k + 4)) * p * p * i * i * mp::exp(2 * k * k * T) *
                    (2 + wpow(mp::abs(2 * p * i * wmax(Wide(1), T)), p * k) + eta) *
                    wpow(d, p * k * i + eta + 2 * k) / (eps * eps);
  out.fits_u64 = fits_u64(out.value);
  if (out.value > out.upper_bound) throw std::logic_error("sample count exceeds its closed-form bound");
  return out;
}

StepSize step_size(const ProblemSpec& spec, double epsilon, double f1_norm_at_0) {
  check_epsilon(epsilon);
  if (!(f1_norm_at_0 >= 0.0)) throw InvalidArgument("drift norm at the origin must be >= 0");
  const Wide k = spec.kappa;
  const Wide i = spec.iota();
  const Wide p = effective_p(spec);
  const Wide T = spec.horizon;
  const Wide eta = spec.eta;
  const Wide d = spec.d;
  const Wide eps = epsilon;
  const Wide kdk = k * wpow(d, k);
  if (Wide(f1_norm_at_0) > wmax(Wide(1), kdk)) {
    throw InvalidArgument("drift norm at the origin " + std::to_string(f1_norm_at_0) +
                          " breaks the growth bound kappa d^kappa");
  }

  StepSize out;
  const Wide head = eps / (wmax(2 * kdk, Wide(1)) + 1 / mp::sqrt(T)) *
                    mp::exp(-(3 + 3 * k + (k * k + 2 * k * i + 2) * T)) /
                    wmax(Wide(1), 2 * k * (k + 1) * wpow(d, k)) * wpow(Wide(2), -(2 * i + 1));
  const Wide base = mp::abs(2 + wmax(wmax(Wide(1), kdk), Wide(f1_norm_at_0)) * wmax(Wide(1), T) +
                            mp::sqrt(2 * (2 * i - 1) * kdk * T));
  out.value = head * wpow(wpow(base, p * i + p * k) + eta * wpow(d, eta), -1 / p);
  out.lower_bound = wmin(Wide(1), mp::sqrt(T)) * mp::exp(-(3 * i * i + 3) * (T + 1)) * wpow(i, -3) *
                    wpow(Wide(2), -(2 * i + 5)) *
                    wpow(wpow(6 * i * wmax(Wide(1), T), p * i + p * k) + eta, -1 / p) *
                    wpow(d, -(2 * k + k * (k + i) + eta)) * eps;
  if (out.value > 1) throw std::logic_error("step size exceeds 1");
  if (out.value < out.lower_bound) throw std::logic_error("step size below its closed-form lower bound");
  return out;
}

double final_bound_d_exponent(double kappa, double p, double eta) {
  const double i = std::max(kappa, 1.0);
  return 2.0 * (p * kappa * i + eta + 2.0 * kappa + i) + (kappa * (2.0 + kappa + i) + eta) * (kappa + 2.0);
}

Monomial final_bound_monomial(const ProblemSpec& spec) {
  const Wide k = spec.kappa;
  const Wide i = spec.iota();
  const Wide p = effective_p(spec);
  const Wide T = spec.horizon;
  const Wide eta = spec.eta;
  const double kd = spec.kappa;
  const double id = spec.iota();
  const double pd = effective_p(spec);

  const Monomial count_bound{wpow(Wide(2), 2 * (k + 4)) * p * p * i * i * mp::exp(2 * k * k * T) *
                                 (2 + wpow(mp::abs(2 * p * i * wmax(Wide(1), T)), p * k) + eta),
                             pd * kd * id + spec.eta + 2.0 * kd, -2.0};
  const Monomial step_bound{wmin(Wide(1), mp::sqrt(T)) * mp::exp(-(3 * i * i + 3) * (T + 1)) *
                                wpow(i, -3) * wpow(Wide(2), -(2 * i + 5)) *
                                wpow(wpow(6 * i * wmax(Wide(1), T), p * i + p * k) + eta, -1 / p),
                            -(kd * (2.0 + kd + id) + spec.eta), 1.0};
  const Monomial width{3 * i * (T + 1), 2.0 * id, 0.0};
  return count_bound.pow(2.0) * width * step_bound.pow(-(kd + 2.0));
}

ComplexityReport complexity_budget(const ProblemSpec& spec, double epsilon, const Wide& max_parameters) {
  const McCount count = mc_count(spec, epsilon);
  const StepSize step = step_size(spec, epsilon, drift_norm_at_origin(spec));

  const Wide k = spec.kappa;
  const Wide i = spec.iota();
  const Wide T = spec.horizon;
  const Wide d = spec.d;
  const Wide& D = step.value;
  const Wide& M = count.value;
  const double delta = std::max(static_cast<double>(D), std::numeric_limits<double>::min());

  const Fnn phi0 = spec.phi0(delta);
  const Fnn phi1 = spec.phi1(delta);
  // Parameter assumption at the step size the construction uses.
  const Wide used = Wide(phi0.complexity()) + Wide(phi1.complexity());
  if (used > k * wpow(d, k) * wpow(Wide(delta), -k)) {
    throw AssumptionViolated("P(phi0) + P(phi1) = " + to_string(used, 6) +
                                 " exceeds kappa d^kappa delta^-kappa at delta = " + to_string(Wide(delta), 6),
                             delta);
  }
  ComplexityReport r;
  r.d = spec.d;
  r.epsilon = epsilon;
  r.user_scaled = false;
  r.M = M;
  r.delta = D;
  r.p_phi0 = Wide(phi0.complexity());
  r.p_phi1 = Wide(phi1.complexity());
  r.steps = mp::floor(T / (D * D) + kFloorGuard) + 1;
  r.p_psi_block = (r.p_phi1 + d * d) * r.steps;
  r.p_varphi = r.p_psi_block + r.p_phi0 + d;
  r.p_Psi = estimator_complexity(phi1.architecture(), phi0.architecture(), r.steps, M);
  r.bound_g_h = M * M * r.p_varphi;

  const Monomial mono = final_bound_monomial(spec);
  const Wide steps_bound = T / (D * D) + 1;
  const Wide M2 = M * M;
  r.chain = {
      {"P(Psi)", r.p_Psi},
      {"M^2 P(varphi)", r.bound_g_h},
      {"M^2 ((P1+d^2)[T/D^2+1] + P0 + d)", M2 * ((r.p_phi1 + d * d) * steps_bound + r.p_phi0 + d)},
      {"M^2 (P1+P0+d^2+d)[T/D^2+1]", M2 * (r.p_phi1 + r.p_phi0 + d * d + d) * steps_bound},
      {"M^2 (k d^k+d^2+d) D^-k [T/D^2+1]", M2 * (k * wpow(d, k) + d * d + d) * wpow(D, -k) * steps_bound},
      {"M^2 3i d^2i [T+1] D^(-k-2)", M2 * 3 * i * wpow(d, 2 * i) * (T + 1) * wpow(D, -k - 2)},
      {"Mbound^2 3i d^2i [T+1] Dlow^(-k-2)",
       count.upper_bound * count.upper_bound * 3 * i * wpow(d, 2 * i) * (T + 1) *
           wpow(step.lower_bound, -k - 2)},
      {"C d^e_d eps^-(k+6)", mono.coef * wpow(d, Wide(mono.d_exp)) * wpow(Wide(epsilon), Wide(mono.eps_exp))},
  };
  r.bound_final = r.chain.back().value;
  r.final_monomial = mono;
  r.materializable = count.fits_u64 && r.p_Psi <= max_parameters;
  return r;
}

bool chain_monotone(const ComplexityReport& report) {
  const Wide slack = 1 + Wide(1e-30);
  for (std::size_t k = 0; k + 1 < report.chain.size(); ++k) {
    if (report.chain[k].value > report.chain[k + 1].value * slack) return false;
  }
  return true;
}

}  // namespace kolmonet
