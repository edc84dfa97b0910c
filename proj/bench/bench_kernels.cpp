// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "kolmonet/kernels.hpp"
#include "kolmonet/linalg.hpp"
#include "kolmonet/validation.hpp"

using namespace kolmonet;

namespace {

struct BatchFixture {
  ResNet net;
  std::vector<Vector> points;
};

BatchFixture make_batch(std::size_t n) {
  Rng rng(1);
  BatchFixture f{random_resnet(rng, {{8, 32, 8}, {8, 32, 8}, {8, 32, 8}, {8, 16, 1}}), {}};
  for (std::size_t k = 0; k < n; ++k) f.points.push_back(random_vector(rng, 8));
  return f;
}

void BM_RealizeBatchSerial(benchmark::State& state) {
  const auto f = make_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(realize_scalar_batch_serial(f.net, Activation::tanh(), f.points));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RealizeBatchParallel(benchmark::State& state) {
  const auto f = make_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(realize_scalar_batch(f.net, Activation::tanh(), f.points));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct EmFixture {
  Fnn drift;
  Fnn readout;
  Matrix calA;
  Vector x;
};

EmFixture make_em() {
  Rng rng(2);
  return {random_fnn(rng, {4, 16, 4}), random_fnn(rng, {4, 8, 1}), sqrt_spd(Matrix::identity(4).scaled(0.5)),
          Vector{0.1, -0.2, 0.3, 0.0}};
}

void BM_EmSamplesSerial(benchmark::State& state) {
  const auto f = make_em();
  const auto act = Activation::tanh();
  for (auto _ : state) {
    benchmark::DoNotOptimize(em_functional_samples_serial(as_scalar_field(f.readout, act), as_field(f.drift, act),
                                                          f.calA, f.x, 1.0, 0.25,
                                                          static_cast<std::size_t>(state.range(0)), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EmSamplesParallel(benchmark::State& state) {
  const auto f = make_em();
  const auto act = Activation::tanh();
  for (auto _ : state) {
    benchmark::DoNotOptimize(em_functional_samples(as_scalar_field(f.readout, act), as_field(f.drift, act), f.calA,
                                                   f.x, 1.0, 0.25, static_cast<std::size_t>(state.range(0)), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_RealizeBatchSerial)->Arg(1024)->Arg(8192)->UseRealTime();
BENCHMARK(BM_RealizeBatchParallel)->Arg(1024)->Arg(8192)->UseRealTime();
BENCHMARK(BM_EmSamplesSerial)->Arg(1024)->Arg(8192)->UseRealTime();
BENCHMARK(BM_EmSamplesParallel)->Arg(1024)->Arg(8192)->UseRealTime();

BENCHMARK_MAIN();
