#include <gtest/gtest.h>

#include <vector>

#include "kolmonet/error.hpp"
#include "kolmonet/fnn.hpp"
#include "kolmonet/validation.hpp"

using namespace kolmonet;

namespace {

Fnn small_net() {
  // 2 -> 3 -> 1
  return Fnn({Layer{Matrix(3, 2, {1, -1, 0.5, 2, -1, 0}), Vector{0.1, -0.2, 0.3}},
              Layer{Matrix(1, 3, {1, 1, -1}), Vector{0.5}}});
}

}  // namespace

TEST(Fnn, ConstructionRejectsBadShapes) {
  EXPECT_THROW(Fnn({}), DimensionMismatch);
  EXPECT_THROW(Fnn({Layer{Matrix(2, 2), Vector(3)}}), DimensionMismatch);
  EXPECT_THROW(Fnn({Layer{Matrix(2, 2), Vector(2)}, Layer{Matrix(1, 3), Vector(1)}}), DimensionMismatch);
  EXPECT_THROW(Fnn({Layer{Matrix(0, 2), Vector{}}}), DimensionMismatch);
}

TEST(Fnn, Metrics) {
  const Fnn net = small_net();
  const auto m = metrics(net);
  EXPECT_EQ(m.depth, 2u);
  EXPECT_EQ(m.input_dim, 2u);
  EXPECT_EQ(m.output_dim, 1u);
  EXPECT_EQ(m.architecture, (std::vector<std::size_t>{2, 3, 1}));
  EXPECT_EQ(m.complexity, 3u * 3u + 1u * 4u);
  EXPECT_EQ(net.width(3), 0u);
}

TEST(Fnn, RealizeByHand) {
  const Fnn net = small_net();
  // hidden = relu(W1 x + B1) for x = (1, 2): (1-2+0.1, 0.5+4-0.2, -1+0.3) -> (0, 4.3, 0)
  const Vector y = realize(net, Activation::relu(), std::vector<double>{1, 2});
  ASSERT_EQ(y.size(), 1u);
  EXPECT_NEAR(y[0], 4.3 + 0.5, 1e-15);
  EXPECT_THROW(realize(net, Activation::relu(), std::vector<double>{1}), DimensionMismatch);
}

TEST(Fnn, DepthOneNeverCallsActivation) {
  std::size_t calls = 0;
  const auto counting = Activation::custom("count", [&calls](double v) {
    ++calls;
    return v;
  });
  const Fnn net({Layer{Matrix(2, 2, {1, 2, 3, 4}), Vector{1, 1}}});
  const Vector y = realize(net, counting, std::vector<double>{1, 1});
  EXPECT_EQ(calls, 0u);
  EXPECT_EQ(y, (Vector{4, 8}));
}

TEST(Fnn, ComposeFusesMiddleLayer) {
  const Fnn inner = small_net();
  const Fnn outer({Layer{Matrix(2, 1, {2, -1}), Vector{0, 1}}, Layer{Matrix(1, 2, {1, 1}), Vector{0}}});
  const Fnn c = compose(outer, inner);
  EXPECT_EQ(c.architecture(), (std::vector<std::size_t>{2, 3, 2, 1}));
  const std::vector<double> x{0.3, -0.7};
  const auto act = Activation::tanh();
  const Vector want = realize(outer, act, realize(inner, act, x));
  EXPECT_NEAR(realize(c, act, x)[0], want[0], 1e-12);
  EXPECT_THROW(compose(inner, inner), DimensionMismatch);
}

TEST(Fnn, ParallelizeSingletonAndMismatch) {
  const Fnn a = small_net();
  const std::vector<Fnn> one{a};
  EXPECT_TRUE(structurally_equal(parallelize(one), a));
  const std::vector<Fnn> mixed{a, Fnn({Layer{Matrix(1, 1), Vector(1)}})};
  EXPECT_THROW(parallelize(mixed), DepthMismatch);
  const std::vector<Fnn> none;
  EXPECT_THROW(parallelize(none), InvalidArgument);
}

TEST(Fnn, ParallelizeTuple) {
  const Fnn a = small_net();
  const std::vector<Fnn> two{a, a};
  const Fnn p = parallelize(two);
  EXPECT_EQ(p.architecture(), (std::vector<std::size_t>{4, 6, 2}));
  const Vector y = realize(p, Activation::relu(), std::vector<double>{1, 2, 1, 2});
  EXPECT_EQ(y[0], y[1]);
}

TEST(Fnn, MatrixMultiplication) {
  const Fnn net = small_net();
  const Matrix m(3, 1, {1, 2, 3});
  const Fnn lm = left_multiply(m, net);
  EXPECT_EQ(lm.complexity(), net.complexity() - 1 * (3 + 1) + 3 * (3 + 1));
  const auto act = Activation::relu();
  const std::vector<double> x{0.2, 0.9};
  const double y = realize(net, act, x)[0];
  const Vector got = realize(lm, act, x);
  EXPECT_NEAR(got[2], 3 * y, 1e-12);
  const Matrix r(2, 1, {1, -1});
  const Fnn rm = right_multiply(net, r);
  EXPECT_NEAR(realize(rm, act, std::vector<double>{0.4})[0], realize(net, act, std::vector<double>{0.4, -0.4})[0],
              1e-12);
}

TEST(Fnn, WeightedSum) {
  Rng rng(11);
  const std::vector<std::size_t> arch{3, 4, 2};
  const std::vector<Fnn> nets{random_fnn(rng, arch), random_fnn(rng, arch), random_fnn(rng, arch)};
  const std::vector<double> h{0.5, -1.0, 2.0};
  const Fnn s = weighted_sum(h, nets);
  EXPECT_LE(s.complexity(), 9 * nets[0].complexity());
  const std::vector<double> x{0.1, 0.2, -0.3};
  const auto act = Activation::tanh();
  Vector want(2, 0.0);
  for (std::size_t j = 0; j < 3; ++j) {
    const auto y = realize(nets[j], act, x);
    want[0] += h[j] * y[0];
    want[1] += h[j] * y[1];
  }
  const Vector got = realize(s, act, x);
  EXPECT_NEAR(got[0], want[0], 1e-12);
  EXPECT_NEAR(got[1], want[1], 1e-12);
  const std::vector<Fnn> mixed{nets[0], random_fnn(rng, {3, 5, 2})};
  const std::vector<double> h2{1, 1};
  EXPECT_THROW(weighted_sum(h2, mixed), ArchMismatch);
}

TEST(Fnn, WeightedSumOfEqualNetsIsTheNet) {
  Rng rng(5);
  const Fnn a = random_fnn(rng, {2, 3, 3, 1});
  const std::vector<Fnn> nets{a, a};
  const std::vector<double> h{0.5, 0.5};
  const Fnn s = weighted_sum(h, nets);
  const std::vector<double> x{0.7, -0.1};
  EXPECT_NEAR(realize(s, Activation::relu(), x)[0], realize(a, Activation::relu(), x)[0], 1e-12);
}

TEST(Fnn, BatteryPasses) {
  const auto r = run_suite("fnn", 40, 3);
  for (const auto& f : r.failures) ADD_FAILURE() << f.check << ": " << f.detail;
  EXPECT_GT(r.checks, 1000u);
}
