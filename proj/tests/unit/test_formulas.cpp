#include <gtest/gtest.h>

#include <string>

#include "kolmonet/error.hpp"
#include "kolmonet/kolmogorov.hpp"

using namespace kolmonet;

namespace {

struct Case {
  std::size_t d;
  double kappa, p, horizon, eta, epsilon, f1;
  const char* raw;
  const char* count;
  const char* count_bound;
  const char* step;
  const char* step_lower;
};

// Frozen from tests/oracles/formula_oracle.py (mpmath, 25 printed digits).
const Case kCases[] = {
    {1, 1, 2, 1, 1, 1, 0, "236931.838734909317633906", "236932", "575045.9018431789232839808",
     "8.916853036972535697356797e-9", "1.332865293389638337812533e-9"},
    {2, 1, 2, 1, 1, 0.5, 0, "9200734.429490862772543693", "9200735", "73605875.43592690218034954",
     "7.243415178786777655266266e-10", "2.082602020921309902832083e-11"},
    {4, 2, 2, 1, 1, 0.25, 0, "3538313405032623539.395223", "3538313405032623540",
     "859831940707470314166.2852", "1.224734703511587126856807e-23", "4.10431544244415702566743e-30"},
    {3, 1.5, 3, 0.5, 2, 0.7, 1.2, "16456983913.29049717282815", "16456983914", "6383748493239743.500140192",
     "1.771243346044250806022569e-13", "1.025966199039068059262588e-17"},
    {8, 1, 2, 2, 1, 1, 3, "6841688765.178866272557548", "6841688766", "490978656580.2668791786358",
     "4.701403660442155543926137e-14", "2.521543456905040351410498e-17"},
};

Fnn zero_drift(std::size_t d) { return Fnn({Layer{Matrix(d, d), Vector(d, 0.0)}}); }

Fnn sum_readout(std::size_t d) {
  return Fnn({Layer{Matrix(1, d, std::vector<double>(d, 1.0)), Vector{0.0}}});
}

ProblemSpec spec_for(std::size_t d, double kappa, double p, double horizon, double eta) {
  ProblemSpec s;
  s.d = d;
  s.kappa = kappa;
  s.p = p;
  s.horizon = horizon;
  s.eta = eta;
  s.diffusion = Matrix::identity(d);
  s.phi1 = [d](double) { return zero_drift(d); };
  s.phi0 = [d](double) { return sum_readout(d); };
  return s;
}

void expect_rel(const Wide& got, const char* want, double rel) {
  const Wide w(want);
  EXPECT_LE(abs(got - w), Wide(rel) * abs(w)) << to_string(got, 25) << " vs " << want;
}

}  // namespace

TEST(Formulas, MatchFrozenOracleValues) {
  for (const auto& c : kCases) {
    const ProblemSpec spec = spec_for(c.d, c.kappa, c.p, c.horizon, c.eta);
    const McCount m = mc_count(spec, c.epsilon);
    expect_rel(m.raw, c.raw, 1e-20);
    EXPECT_EQ(m.value, Wide(c.count));
    expect_rel(m.upper_bound, c.count_bound, 1e-20);
    const StepSize s = step_size(spec, c.epsilon, c.f1);
    expect_rel(s.value, c.step, 1e-20);
    expect_rel(s.lower_bound, c.step_lower, 1e-20);
  }
}

TEST(Formulas, SampleCountMonotoneAndBounded) {
  const ProblemSpec spec = spec_for(3, 1, 2, 1, 1);
  Wide previous = 0;
  for (double eps : {1.0, 0.7, 0.5, 0.25, 0.1, 0.01}) {
    const McCount m = mc_count(spec, eps);
    EXPECT_GE(m.value, previous);
    EXPECT_LE(m.value, m.upper_bound);
    EXPECT_GE(m.value, m.raw);
    previous = m.value;
  }
  EXPECT_THROW(mc_count(spec, 0.0), InvalidArgument);
  EXPECT_THROW(mc_count(spec, 1.5), InvalidArgument);
}

TEST(Formulas, StepSizeLinearInEpsilon) {
  for (std::size_t d : {1u, 2u, 5u}) {
    const ProblemSpec spec = spec_for(d, 1, 2, 1, 1);
    for (double eps : {1.0, 0.6, 0.2}) {
      const Wide full = step_size(spec, eps, 0.5).value;
      const Wide half = step_size(spec, eps / 2, 0.5).value;
      EXPECT_LE(full, 1);
      EXPECT_LE(abs(half * 2 - full), Wide("1e-40") * full);
    }
  }
}

TEST(Formulas, StepSizeRejectsLargeDriftNorm) {
  const ProblemSpec spec = spec_for(1, 1, 2, 1, 1);
  EXPECT_THROW(step_size(spec, 0.5, 2.0), InvalidArgument);
  EXPECT_THROW(step_size(spec, 0.5, -1.0), InvalidArgument);
}

TEST(Formulas, ZeroKappaIsAccepted) {
  const ProblemSpec spec = spec_for(2, 0, 2, 1, 1);
  const McCount m = mc_count(spec, 0.5);
  EXPECT_GE(m.value, 1);
  const StepSize s = step_size(spec, 0.5, 0.0);
  EXPECT_GT(s.value, 0);
  EXPECT_LE(s.value, 1);
}

TEST(Formulas, FinalExponents) {
  for (double kappa : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    for (double p : {1.0, 2.0, 3.0}) {
      ProblemSpec spec = spec_for(2, kappa, p, 1, 1.5);
      const Monomial mono = final_bound_monomial(spec);
      EXPECT_DOUBLE_EQ(mono.eps_exp, -(kappa + 6));
      EXPECT_DOUBLE_EQ(mono.d_exp, final_bound_d_exponent(kappa, std::max(p, 2.0), 1.5));
    }
  }
  // kappa = 1, p = 2, eta = 1: 2 (2 + 1 + 2 + 1) + (4 + 1) * 3
  EXPECT_DOUBLE_EQ(final_bound_d_exponent(1, 2, 1), 27.0);
}

TEST(Formulas, ChainMonotoneOnGrid) {
  for (std::size_t d : {1u, 2u, 4u, 8u}) {
    const ProblemSpec spec = spec_for(d, 1, 2, 1, 1);
    for (double eps : {1.0, 0.5, 0.25}) {
      const ComplexityReport r = complexity_budget(spec, eps);
      ASSERT_EQ(r.chain.size(), 8u);
      EXPECT_TRUE(chain_monotone(r));
      EXPECT_FALSE(r.user_scaled);
      EXPECT_EQ(r.chain.front().value, r.p_Psi);
      EXPECT_EQ(r.chain[1].value, r.M * r.M * r.p_varphi);
      EXPECT_LE(r.p_Psi, r.bound_g_h);
      EXPECT_LE(r.bound_g_h, *r.bound_final);
      EXPECT_FALSE(r.materializable);
    }
  }
}

TEST(Formulas, ChainMonotoneDetectsViolation) {
  const ProblemSpec spec = spec_for(2, 1, 2, 1, 1);
  ComplexityReport r = complexity_budget(spec, 0.5);
  EXPECT_TRUE(chain_monotone(r));
  r.chain[3].value = r.chain[4].value * 2;
  EXPECT_FALSE(chain_monotone(r));
}

TEST(Formulas, AssumptionViolatedCarriesDelta) {
  ProblemSpec spec = spec_for(2, 0, 2, 1, 1);
  try {
    (void)complexity_budget(spec, 0.5);
    FAIL() << "expected AssumptionViolated";
  } catch (const AssumptionViolated& e) {
    EXPECT_GT(e.delta(), 0.0);
    EXPECT_LE(e.delta(), 1.0);
  }
}
