// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "kolmonet/config.hpp"
#include "kolmonet/harness.hpp"
#include "kolmonet/kernels.hpp"
#include "kolmonet/kolmogorov.hpp"
#include "kolmonet/linalg.hpp"
#include "kolmonet/sde.hpp"
#include "kolmonet/serialize.hpp"
#include "kolmonet/validation.hpp"

using namespace kolmonet;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

Fnn zero_drift(std::size_t d) { return Fnn({Layer{Matrix(d, d), Vector(d, 0.0)}}); }

Fnn sum_readout(std::size_t d) {
  return Fnn({Layer{Matrix(1, d, std::vector<double>(d, 1.0)), Vector{0.0}}});
}

ScalarField sum_field() {
  return [](std::span<const double> y) {
    double s = 0.0;
    for (double v : y) s += v;
    return s;
  };
}

ProblemSpec make_spec(std::size_t d, double horizon, const Fnn& phi1, const Fnn& phi0, Activation act) {
  ProblemSpec s;
  s.d = d;
  s.horizon = horizon;
  s.diffusion = Matrix::identity(d).scaled(0.5);
  s.phi1 = [phi1](double) { return phi1; };
  s.phi0 = [phi0](double) { return phi0; };
  s.activation = act;
  s.validate();
  return s;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "kolmonet_acceptance" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. Calculus identities over randomized cases.
Outcome calculus_identities() {
  const auto start = Clock::now();
  Outcome out;
  std::size_t checks = 0;
  for (const char* name : {"fnn", "resnet"}) {
    const SuiteResult r = run_suite(name, 200, 20240601);
    checks += r.checks;
    if (!r.passed()) {
      out.pass = false;
      out.detail += std::string(name) + " failed " + r.failures.front().check + " (" + r.failures.front().detail + "); ";
    }
  }
  const double t = seconds_since(start);
  if (t > 30.0) out.pass = false;
  out.detail += "200 cases per suite, " + std::to_string(checks) + " checks, " + fmt(t, 3) + " s (limit 30 s)";
  return out;
}

// 2. EM ResNet realization against the explicit simulation.
Outcome em_equivalence() {
  const auto start = Clock::now();
  Outcome out;
  Rng rng(77);
  const auto act = Activation::tanh();
  double worst = 0.0;
  std::size_t compared = 0;
  for (std::size_t d : {1u, 2u, 5u}) {
    const Fnn phi1 = random_fnn(rng, {d, 8, d});
    const Matrix calA = sqrt_spd(Matrix::identity(d).scaled(0.5));
    for (double delta : {0.5, 0.25}) {
      for (double horizon : {0.9, 1.0}) {
        for (std::size_t start_index = 0; start_index < 100; ++start_index) {
          const auto path = sample_brownian(d, horizon, delta, start_index + 1, 5);
          const ResNet psi = build_em_resnet(phi1, delta, horizon, path, calA);
          const Vector x = random_vector(rng, d, 2.0);
          const Vector net = realize(psi, act, x);
          const Vector sim = em_simulate(as_field(phi1, act), calA, x, horizon, delta, path);
          Vector diff(d);
          for (std::size_t j = 0; j < d; ++j) diff[j] = net[j] - sim[j];
          worst = std::max(worst, norm2(diff) / (1.0 + norm2(sim)));
          ++compared;
        }
      }
    }
  }
  const double t = seconds_since(start);
  out.pass = worst <= 1e-9 && t <= 10.0;
  out.detail = std::to_string(compared) + " starts, max relative gap " + fmt(worst, 3) + " (tol 1e-9), " +
               fmt(t, 3) + " s (limit 10 s)";
  return out;
}

// 3. Driftless affine problem in d = 1, 2, 10.
Outcome driftless_affine() {
  const auto start = Clock::now();
  Outcome out;
  const std::size_t samples = 1024;
  const double delta = 1.0, horizon = 1.0;
  const std::uint64_t seed = 11;
  double worst_ratio = 0.0;
  for (std::size_t d : {1u, 2u, 10u}) {
    const ProblemSpec spec = make_spec(d, horizon, zero_drift(d), sum_readout(d), Activation::relu());
    const Estimator est = build_estimator(spec, delta, samples, seed);
    const Matrix calA = sqrt_spd(spec.diffusion);
    for (std::size_t k = 0; k < 20; ++k) {
      const Vector x = SamplingMeasure::gaussian().sample(d, seed, k);
      const auto values =
          em_functional_samples(sum_field(), as_field(zero_drift(d), spec.activation), calA, x, horizon, delta,
                                samples, seed);
      const double se = bootstrap_standard_error(values, 1000, seed + k);
      const double exact = std::accumulate(x.begin(), x.end(), 0.0);
      const double err = std::abs(realize(est.network, spec.activation, x)[0] - exact);
      worst_ratio = std::max(worst_ratio, err / (3.0 * se));
    }
  }
  const double t = seconds_since(start);
  out.pass = worst_ratio <= 1.0 && t <= 60.0;
  out.detail = "M = 1024, 20 points per d, max |error| / (3 bootstrap SE) = " + fmt(worst_ratio, 3) + ", " +
               fmt(t, 3) + " s (limit 60 s)";
  return out;
}

// 4. Linear drift f1(x) = -x, f0(x) = x.
Outcome ou_drift() {
  Outcome out;
  const std::size_t samples = 4096;
  const double horizon = 1.0;
  const std::uint64_t seed = 21;
  const Fnn phi1({Layer{Matrix(1, 1, Vector{-1.0}), Vector{0.0}}});
  const ProblemSpec spec = make_spec(1, horizon, phi1, sum_readout(1), Activation::relu());
  const Matrix calA = sqrt_spd(spec.diffusion);
  const double continuous = std::exp(-horizon);
  std::ostringstream detail;
  double gaps[2] = {0.0, 0.0};
  int slot = 0;
  for (double step : {0.25, 0.125}) {
    const double delta = std::sqrt(step);
    const auto ref = ReferenceSolution::discrete_affine_recursion({1.0}, 0.0, Matrix(1, 1, Vector{-1.0}), delta);
    const double factor = closed_form(ref, horizon, Vector{1.0});
    gaps[slot++] = continuous - factor;
    const Estimator est = build_estimator(spec, delta, samples, seed);
    for (double x0 : {1.0, 2.0}) {
      const Vector x{x0};
      const auto values = em_functional_samples(sum_field(), as_field(phi1, spec.activation), calA, x, horizon, delta,
                                                samples, seed);
      const double se = mean_and_error(values).standard_error;
      const double value = realize(est.network, spec.activation, x)[0];
      const bool discrete_ok = std::abs(value - factor * x0) <= 3 * se;
      const bool continuous_ok =
          step != 0.25 || std::abs(value - continuous * x0) <= 3 * se + std::abs(continuous - factor) * std::abs(x0);
      out.pass = out.pass && discrete_ok && continuous_ok;
      detail << "dt=" << step << " x=" << x0 << ": " << fmt(value, 6) << " vs " << fmt(factor * x0, 8) << " (3SE "
             << fmt(3 * se, 3) << ")" << (discrete_ok && continuous_ok ? "" : " MISS") << "; ";
    }
  }
  if (std::abs(gaps[0] - (std::exp(-1.0) - 0.31640625)) > 1e-15) out.pass = false;
  const double ratio = gaps[0] / gaps[1];
  out.pass = out.pass && ratio >= 1.5 && ratio <= 3.0;
  detail << "gap ratio " << fmt(ratio, 4) << " (window [1.5, 3])";
  out.detail = detail.str();
  return out;
}

// 5. ReLU initial value under pure diffusion.
Outcome relu_gaussian() {
  Outcome out;
  const std::size_t samples = 4096;
  const std::uint64_t seed = 31;
  const Fnn relu({Layer{Matrix(1, 1, Vector{1.0}), Vector{0.0}}, Layer{Matrix(1, 1, Vector{1.0}), Vector{0.0}}});
  const ProblemSpec spec = make_spec(1, 1.0, zero_drift(1), relu, Activation::relu());
  const Estimator est = build_estimator(spec, 1.0, samples, seed);
  const auto ref = ReferenceSolution::relu_gaussian_1d(1.0);
  const Matrix calA = sqrt_spd(spec.diffusion);
  double worst = 0.0;
  for (double x0 : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    const Vector x{x0};
    const auto values = em_functional_samples(as_scalar_field(relu, spec.activation),
                                              as_field(zero_drift(1), spec.activation), calA, x, 1.0, 1.0, samples,
                                              seed);
    const double se = mean_and_error(values).standard_error;
    const double err = std::abs(realize(est.network, spec.activation, x)[0] - closed_form(ref, 1.0, x));
    worst = std::max(worst, err / (3 * se));
  }
  out.pass = worst <= 1.0;
  out.detail = "M = 4096, x in {-2..2}, max |error| / (3 SE) = " + fmt(worst, 3);
  return out;
}

// 6. Parameter accounting: materialized counts, the bound chain and the epsilon exponent.
Outcome complexity_accounting() {
  Outcome out;
  Rng rng(41);
  std::size_t built = 0;
  for (double delta : {0.5, 0.35, 0.25}) {
    for (std::size_t samples : {1u, 3u, 8u}) {
      for (std::size_t d : {1u, 2u, 3u}) {
        const Fnn phi1 = random_fnn(rng, {d, 3, d});
        const Fnn phi0 = random_fnn(rng, {d, 2, 1});
        const ProblemSpec spec = make_spec(d, 1.0, phi1, phi0, Activation::tanh());
        const Estimator est = build_estimator(spec, delta, samples, 3);
        const auto nets = build_sample_networks(spec, delta, samples, 3);
        const double grid_end = chi(delta, 1.0);
        const auto blocks = static_cast<ParamCount>(std::llround(grid_end / (delta * delta))) + 1;
        const ParamCount psi = (phi1.complexity() + d * d) * blocks;
        const ParamCount varphi = psi + phi0.complexity() + d;
        const bool ok = nets.front().complexity() == varphi && Wide(psi) == est.report.p_psi_block &&
                        Wide(est.network.complexity()) == est.report.p_Psi &&
                        Wide(est.network.complexity()) <= Wide(samples) * Wide(samples) * Wide(varphi);
        if (!ok) {
          out.pass = false;
          out.detail += "count mismatch at delta=" + fmt(delta) + " M=" + std::to_string(samples) +
                        " d=" + std::to_string(d) + "; ";
        }
        ++built;
      }
    }
  }
  std::size_t chains = 0;
  for (std::size_t d : {1u, 2u, 4u, 8u}) {
    ProblemSpec spec = make_spec(d, 1.0, zero_drift(d), sum_readout(d), Activation::relu());
    spec.kappa = 1.0;
    spec.p = 2.0;
    spec.eta = 1.0;
    for (double eps : {1.0, 0.5, 0.25}) {
      const ComplexityReport r = complexity_budget(spec, eps);
      if (!chain_monotone(r) || r.chain.size() != 8) {
        out.pass = false;
        out.detail += "chain not monotone at d=" + std::to_string(d) + " eps=" + fmt(eps) + "; ";
      }
      ++chains;
    }
  }
  for (double kappa : {0.0, 1.0, 2.0}) {
    ProblemSpec spec = make_spec(2, 1.0, zero_drift(2), sum_readout(2), Activation::relu());
    spec.kappa = kappa;
    const Monomial mono = final_bound_monomial(spec);
    if (mono.eps_exp != -(kappa + 6) || mono.d_exp != final_bound_d_exponent(kappa, 2.0, spec.eta)) {
      out.pass = false;
      out.detail += "exponent mismatch at kappa=" + fmt(kappa) + "; ";
    }
  }
  out.detail += std::to_string(built) + " built estimators match exactly, " + std::to_string(chains) +
                " bound chains monotone, epsilon exponent -(kappa+6) for kappa in {0,1,2}";
  return out;
}

// 7. Monte Carlo error scaling through the study command.
Outcome mc_scaling() {
  Outcome out;
  std::string seeds;
  for (int s = 1; s <= 64; ++s) seeds += (s > 1 ? ", " : "") + std::to_string(s);
  const std::string text =
      "problem: {d: 2, T: 1.0, diffusion: {kind: scalar, value: 0.5}, phi0: {kind: affine}, phi1: {kind: zero}}\n"
      "reference: {kind: affine_no_drift}\n"
      "study: {epsilon_grid: [1.0], d_grid: [2], delta_grid: [1.0], M_grid: [16, 64, 256, 1024], seeds: [" +
      seeds + "], n_eval_points: 100, p: 2.0}\n";
  const Config config = parse_config(text);
  CommandOptions opts;
  opts.out = scratch("mc_scaling");
  std::ostringstream log;
  cmd_study(config, opts, log);
  const double slope = load_json(opts.out / "slopes.json")["error_vs_M"].get<double>();
  out.pass = std::abs(slope + 0.5) <= 0.15;
  out.detail = "RMS over 64 seeds, slope " + fmt(slope, 4) + " (target -0.5 +- 0.15)";
  return out;
}

// 8. Byte-identical rebuilds and cross-seed agreement.
Outcome determinism() {
  Outcome out;
  const Config config = parse_config(
      "problem: {d: 2, T: 1.0, diffusion: {kind: scalar, value: 0.5}, phi0: {kind: affine}, phi1: {kind: zero}}\n"
      "build: {delta: 0.5, samples: 256}\nseed: 5\n");
  std::ostringstream log;
  CommandOptions a, b;
  a.out = scratch("det_a");
  b.out = scratch("det_b");
  cmd_build(config, a, log);
  cmd_build(config, b, log);
  const std::string ja = slurp(a.out / "estimator.json");
  const bool identical = !ja.empty() && ja == slurp(b.out / "estimator.json");

  const ProblemSpec spec = make_problem(config, 2);
  const Matrix calA = sqrt_spd(spec.diffusion);
  const Vector x{0.5, -0.25};
  const double exact = 0.25;
  double est[2], half[2];
  int slot = 0;
  for (std::uint64_t seed : {5u, 6u}) {
    const Estimator e = build_estimator(spec, config.delta, config.samples, seed);
    const auto values =
        em_functional_samples(sum_field(), as_field(zero_drift(2), spec.activation), calA, x, 1.0, 0.5, 256, seed);
    est[slot] = realize(e.network, spec.activation, x)[0] - exact;
    half[slot] = 3 * bootstrap_standard_error(values, 1000, seed);
    ++slot;
  }
  const bool differ = est[0] != est[1];
  const bool agree = std::abs(est[0] - est[1]) <= half[0] + half[1];
  out.pass = identical && differ && agree;
  out.detail = std::string("rebuild ") + (identical ? "byte-identical" : "DIFFERS") + ", seed errors " +
               fmt(est[0], 4) + " +- " + fmt(half[0], 3) + " and " + fmt(est[1], 4) + " +- " + fmt(half[1], 3) +
               (agree ? " overlap" : " DISJOINT");
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"calculus identities", calculus_identities},
      {"EM embedding equivalence", em_equivalence},
      {"driftless affine accuracy", driftless_affine},
      {"linear drift accuracy", ou_drift},
      {"relu Gaussian check", relu_gaussian},
      {"complexity accounting", complexity_accounting},
      {"Monte Carlo scaling", mc_scaling},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail
              << " [" << fmt(seconds_since(start), 3) << " s]" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
