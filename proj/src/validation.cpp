#include "kolmonet/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "kolmonet/error.hpp"
#include "kolmonet/kolmogorov.hpp"
#include "kolmonet/linalg.hpp"
#include "kolmonet/rng.hpp"
#include "kolmonet/sde.hpp"

namespace kolmonet {

namespace {

constexpr std::size_t kMaxWidth = 8;
constexpr std::size_t kMaxDepth = 4;
constexpr std::size_t kMaxCopies = 5;
constexpr std::size_t kInputsPerCase = 100;
constexpr double kRel = 1e-9;
constexpr double kTight = 1e-12;
constexpr std::size_t kMaxStoredFailures = 25;

class Recorder {
 public:
  explicit Recorder(SuiteResult& out) : out_(out) {}

  void check(bool ok, const std::string& name, const std::function<std::string()>& detail = {}) {
    ++out_.checks;
    if (ok) return;
    if (out_.failures.size() < kMaxStoredFailures) out_.failures.push_back({name, detail ? detail() : ""});
    else if (out_.failures.size() == kMaxStoredFailures) out_.failures.push_back({"...", "further failures omitted"});
  }

 private:
  SuiteResult& out_;
};

Activation random_activation(Rng& rng) {
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return Activation::identity();
    case 1: return Activation::relu();
    default: return Activation::tanh();
  }
}

std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Rng case_rng(std::uint64_t seed, std::uint64_t op, std::uint64_t k) {
  return Rng(stream_key({seed, op, k}));
}

std::string describe(const Vector& a, const Vector& b) {
  Vector diff(a.size());
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) diff[i] = a[i] - b[i];
  std::ostringstream os;
  os << "|diff| = " << norm2(diff) << ", |ref| = " << norm2(b);
  return os.str();
}

/// Architecture with prescribed end widths.
std::vector<std::size_t> random_arch_between(Rng& rng, std::size_t in, std::size_t out, std::size_t depth) {
  std::vector<std::size_t> arch{in};
  for (std::size_t k = 1; k < depth; ++k) arch.push_back(uniform_size(rng, 1, kMaxWidth));
  arch.push_back(out);
  return arch;
}

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  std::vector<double> v(rows * cols);
  for (auto& x : v) x = n(rng);
  return Matrix(rows, cols, std::move(v));
}

Matrix random_spd(Rng& rng, std::size_t d) {
  const Matrix q = random_matrix(rng, d, d, 1.0);
  Matrix a = (q * q.transposed()).scaled(1.0 / static_cast<double>(d));
  auto v = a.to_row_major();
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] += 0.5;
  return Matrix(d, d, std::move(v));
}

// ---------------------------------------------------------------------------

void fnn_suite(SuiteResult& out, std::size_t cases, std::uint64_t seed) {
  Recorder rec(out);
  for (std::size_t k = 0; k < cases; ++k) {
    // composition
    {
      Rng rng = case_rng(seed, 1, k);
      const auto act = random_activation(rng);
      const Fnn inner = random_fnn(rng, random_arch(rng, kMaxWidth, kMaxDepth));
      const Fnn outer = random_fnn(rng, random_arch_between(rng, inner.output_dim(), uniform_size(rng, 1, kMaxWidth),
                                                            uniform_size(rng, 1, kMaxDepth)));
      const Fnn c = compose(outer, inner);
      auto expected = inner.architecture();
      expected.pop_back();
      const auto oa = outer.architecture();
      expected.insert(expected.end(), oa.begin() + 1, oa.end());
      rec.check(c.architecture() == expected, "fnn.compose.arch");
      for (std::size_t i = 0; i < kInputsPerCase; ++i) {
        const Vector x = random_vector(rng, inner.input_dim());
        const Vector want = realize(outer, act, realize(inner, act, x));
        const Vector got = realize(c, act, x);
        rec.check(close(got, want, kRel), "fnn.compose.realization", [&] { return describe(got, want); });
      }
      ++out.cases;
    }
    // parallelization
    {
      Rng rng = case_rng(seed, 2, k);
      const auto act = random_activation(rng);
      const std::size_t depth = uniform_size(rng, 1, kMaxDepth);
      const std::size_t u = uniform_size(rng, 1, kMaxCopies);
      std::vector<Fnn> nets;
      for (std::size_t j = 0; j < u; ++j) {
        nets.push_back(random_fnn(rng, random_arch_between(rng, uniform_size(rng, 1, kMaxWidth),
                                                           uniform_size(rng, 1, kMaxWidth), depth)));
      }
      const Fnn par = parallelize(nets);
      std::vector<std::size_t> arch_sum(depth + 1, 0);
      for (const auto& n : nets) {
        for (std::size_t l = 0; l <= depth; ++l) arch_sum[l] += n.width(l);
      }
      rec.check(par.architecture() == arch_sum, "fnn.parallelize.arch");
      for (std::size_t i = 0; i < 10; ++i) {
        std::vector<Vector> xs, ys;
        for (const auto& n : nets) {
          xs.push_back(random_vector(rng, n.input_dim()));
          ys.push_back(realize(n, act, xs.back()));
        }
        const Vector got = realize(par, act, concat(xs));
        const Vector want = concat(ys);
        rec.check(close(got, want, kTight), "fnn.parallelize.realization", [&] { return describe(got, want); });
      }
      ++out.cases;
    }
    // matrix multiplication on either side
    {
      Rng rng = case_rng(seed, 3, k);
      const auto act = random_activation(rng);
      const Fnn net = random_fnn(rng, random_arch(rng, kMaxWidth, kMaxDepth));
      const std::size_t m_out = uniform_size(rng, 1, kMaxWidth);
      const std::size_t m_in = uniform_size(rng, 1, kMaxWidth);
      const Matrix left = random_matrix(rng, m_out, net.output_dim(), 1.0);
      const Matrix right = random_matrix(rng, net.input_dim(), m_in, 1.0);
      const Fnn lm = left_multiply(left, net);
      const Fnn rm = right_multiply(net, right);
      const auto arch = net.architecture();
      const std::size_t L = net.depth();
      const ParamCount want_left =
          net.complexity() - arch[L] * (arch[L - 1] + 1) + m_out * (arch[L - 1] + 1);
      rec.check(lm.complexity() == want_left, "fnn.left_multiply.complexity");
      for (std::size_t i = 0; i < 10; ++i) {
        const Vector x = random_vector(rng, net.input_dim());
        const Vector gl = realize(lm, act, x);
        const Vector wl = left.apply(realize(net, act, x));
        rec.check(close(gl, wl, kTight), "fnn.left_multiply.realization", [&] { return describe(gl, wl); });
        const Vector z = random_vector(rng, m_in);
        const Vector gr = realize(rm, act, z);
        const Vector wr = realize(net, act, right.apply(z));
        rec.check(close(gr, wr, kTight), "fnn.right_multiply.realization", [&] { return describe(gr, wr); });
      }
      ++out.cases;
    }
    // weighted sums
    {
      Rng rng = case_rng(seed, 4, k);
      const auto act = random_activation(rng);
      const auto arch = random_arch(rng, kMaxWidth, kMaxDepth);
      const std::size_t u = uniform_size(rng, 1, kMaxCopies);
      std::vector<Fnn> nets;
      for (std::size_t j = 0; j < u; ++j) nets.push_back(random_fnn(rng, arch));
      const Vector h = random_vector(rng, u);
      const Fnn sum = weighted_sum(h, nets);
      rec.check(sum.complexity() <= u * u * nets.front().complexity(), "fnn.weighted_sum.bound");
      for (std::size_t i = 0; i < 10; ++i) {
        const Vector x = random_vector(rng, arch.front());
        Vector want(arch.back(), 0.0);
        for (std::size_t j = 0; j < u; ++j) {
          const Vector y = realize(nets[j], act, x);
          for (std::size_t r = 0; r < y.size(); ++r) want[r] += h[j] * y[r];
        }
        const Vector got = realize(sum, act, x);
        rec.check(close(got, want, kRel), "fnn.weighted_sum.realization", [&] { return describe(got, want); });
      }
      ++out.cases;
    }
    // depth-one networks never call the activation
    {
      Rng rng = case_rng(seed, 5, k);
      std::size_t calls = 0;
      const Activation counting = Activation::custom("counting", [&calls](double v) {
        ++calls;
        return v;
      });
      const Fnn net = random_fnn(rng, {uniform_size(rng, 1, kMaxWidth), uniform_size(rng, 1, kMaxWidth)});
      (void)realize(net, counting, random_vector(rng, net.input_dim()));
      rec.check(calls == 0, "fnn.depth_one.no_activation");
      ++out.cases;
    }
  }
}

// ---------------------------------------------------------------------------

std::vector<std::vector<std::size_t>> random_block_archs(Rng& rng, std::size_t in, std::size_t n) {
  std::vector<std::vector<std::size_t>> archs;
  std::size_t d = in;
  for (std::size_t b = 0; b < n; ++b) {
    const std::size_t next = uniform_size(rng, 1, kMaxWidth);
    archs.push_back(random_arch_between(rng, d, next, uniform_size(rng, 1, kMaxDepth)));
    d = next;
  }
  return archs;
}

void resnet_suite(SuiteResult& out, std::size_t cases, std::uint64_t seed) {
  Recorder rec(out);
  for (std::size_t k = 0; k < cases; ++k) {
    // composition
    {
      Rng rng = case_rng(seed, 11, k);
      const auto act = random_activation(rng);
      const ResNet inner = random_resnet(rng, random_block_archs(rng, uniform_size(rng, 1, kMaxWidth),
                                                                 uniform_size(rng, 1, kMaxDepth)));
      const ResNet outer = random_resnet(rng, random_block_archs(rng, inner.output_dim(), uniform_size(rng, 1, kMaxDepth)));
      const ResNet c = compose(outer, inner);
      rec.check(c.complexity() == inner.complexity() + outer.complexity(), "resnet.compose.additivity");
      for (std::size_t i = 0; i < kInputsPerCase; ++i) {
        const Vector x = random_vector(rng, inner.input_dim());
        const Vector want = realize(outer, act, realize(inner, act, x));
        const Vector got = realize(c, act, x);
        rec.check(close(got, want, kRel), "resnet.compose.realization", [&] { return describe(got, want); });
      }
      ++out.cases;
    }
    // appending an FNN
    {
      Rng rng = case_rng(seed, 12, k);
      const auto act = random_activation(rng);
      const ResNet net = random_resnet(rng, random_block_archs(rng, uniform_size(rng, 1, kMaxWidth),
                                                               uniform_size(rng, 1, kMaxDepth)));
      const Fnn phi = random_fnn(rng, random_arch_between(rng, net.output_dim(), uniform_size(rng, 1, kMaxWidth),
                                                          uniform_size(rng, 1, kMaxDepth)));
      const ResNet app = append(phi, net);
      rec.check(app.complexity() == net.complexity() + phi.complexity() + phi.input_dim() * phi.output_dim(),
                "resnet.append.complexity");
      const Matrix& gamma = app.blocks().back().shortcut;
      bool zero = gamma.rows() == phi.output_dim() && gamma.cols() == phi.input_dim();
      for (std::size_t r = 0; zero && r < gamma.rows(); ++r) {
        for (std::size_t c = 0; c < gamma.cols(); ++c) zero = zero && gamma.entry(r, c) == 0.0;
      }
      rec.check(zero, "resnet.append.zero_shortcut");
      for (std::size_t i = 0; i < 10; ++i) {
        const Vector x = random_vector(rng, net.input_dim());
        const Vector want = realize(phi, act, realize(net, act, x));
        const Vector got = realize(app, act, x);
        rec.check(close(got, want, kRel), "resnet.append.realization", [&] { return describe(got, want); });
      }
      ++out.cases;
    }
    // parallelization and weighted sums share one family of nets
    {
      Rng rng = case_rng(seed, 13, k);
      const auto act = random_activation(rng);
      const auto archs = random_block_archs(rng, uniform_size(rng, 1, kMaxWidth), uniform_size(rng, 1, kMaxDepth));
      const std::size_t u = uniform_size(rng, 1, kMaxCopies);
      std::vector<ResNet> nets;
      for (std::size_t j = 0; j < u; ++j) nets.push_back(random_resnet(rng, archs));
      const ParamCount p1 = nets.front().complexity();

      const ResNet par = parallelize(nets);
      rec.check(par.complexity() <= u * u * p1, "resnet.parallelize.bound");
      auto scaled_dims = nets.front().dims();
      for (auto& v : scaled_dims) v *= u;
      rec.check(par.dims() == scaled_dims, "resnet.parallelize.dims");

      const Vector h = random_vector(rng, u);
      const ResNet sum = weighted_sum(h, nets);
      rec.check(sum.complexity() <= u * u * p1, "resnet.weighted_sum.bound");
      rec.check(Wide(sum.complexity()) == weighted_sum_complexity<Wide>(archs, Wide(u)),
                "resnet.weighted_sum.shape_formula");
      for (std::size_t i = 0; i < 10; ++i) {
        std::vector<Vector> xs, ys;
        for (const auto& n : nets) {
          xs.push_back(random_vector(rng, n.input_dim()));
          ys.push_back(realize(n, act, xs.back()));
        }
        const Vector got_par = realize(par, act, concat(xs));
        const Vector want_par = concat(ys);
        rec.check(close(got_par, want_par, kRel), "resnet.parallelize.realization",
                  [&] { return describe(got_par, want_par); });

        const Vector x = xs.front();
        Vector want(nets.front().output_dim(), 0.0);
        for (std::size_t j = 0; j < u; ++j) {
          const Vector y = realize(nets[j], act, x);
          for (std::size_t r = 0; r < y.size(); ++r) want[r] += h[j] * y[r];
        }
        const Vector got = realize(sum, act, x);
        rec.check(close(got, want, kRel), "resnet.weighted_sum.realization", [&] { return describe(got, want); });
      }
      out.cases += 2;
    }
    // identity shortcuts around zero residuals
    {
      Rng rng = case_rng(seed, 14, k);
      const auto act = random_activation(rng);
      const std::size_t d = uniform_size(rng, 1, kMaxWidth);
      std::vector<ResidualBlock> blocks;
      for (std::size_t b = 0, n = uniform_size(rng, 1, kMaxDepth); b < n; ++b) {
        auto arch = random_arch_between(rng, d, d, uniform_size(rng, 1, kMaxDepth));
        std::vector<Layer> layers;
        for (std::size_t l = 1; l < arch.size(); ++l) layers.push_back({Matrix(arch[l], arch[l - 1]), Vector(arch[l], 0.0)});
        blocks.push_back({Matrix::identity(d), Fnn(std::move(layers))});
      }
      const ResNet id(std::move(blocks));
      const Vector x = random_vector(rng, d);
      rec.check(realize(id, act, x) == x, "resnet.identity_blocks.exact");
      ++out.cases;
    }
  }
}

// ---------------------------------------------------------------------------

void embedding_suite(SuiteResult& out, std::size_t cases, std::uint64_t seed) {
  Recorder rec(out);
  const double deltas[] = {0.5, 0.25, 0.4, 0.3};
  const double horizons[] = {0.9, 1.0, 0.37};
  const std::size_t dims[] = {1, 2, 3, 5};
  const Activation act = Activation::tanh();
  for (std::size_t k = 0; k < cases; ++k) {
    Rng rng = case_rng(seed, 21, k);
    const std::size_t d = dims[k % 4];
    const double delta = deltas[(k / 4) % 4];
    const double T = horizons[(k / 16) % 3];
    const Fnn drift = random_fnn(rng, random_arch_between(rng, d, d, uniform_size(rng, 1, 3)));
    const Matrix calA = sqrt_spd(random_spd(rng, d));

    const TimeGrid grid = TimeGrid::make(delta, T);
    const double c = chi(delta, T);
    rec.check(chi(delta, c) == c, "grid.chi.idempotent");
    rec.check(T - c > -1e-12 && T - c < delta * delta, "grid.chi.window");
    rec.check(grid.intervals() == static_cast<std::size_t>(std::llround(c / (delta * delta))) + 1, "grid.block_count");

    const auto path = sample_brownian(d, T, delta, k + 1, seed);
    const ResNet psi = build_em_resnet(drift, delta, T, path, calA);
    rec.check(psi.complexity() == (drift.complexity() + d * d) * grid.intervals(), "embedding.psi.complexity");
    const VectorField field = as_field(drift, act);
    for (std::size_t i = 0; i < 10; ++i) {
      const Vector x = random_vector(rng, d);
      const Vector want = em_simulate(field, calA, x, T, delta, path);
      const Vector got = realize(psi, act, x);
      rec.check(close(got, want, kRel), "embedding.em_equivalence", [&] { return describe(got, want); });
    }

    // estimator linearity and count formulas on a small instance
    if (k % 8 == 0) {
      ProblemSpec spec;
      spec.d = d;
      spec.horizon = T;
      spec.diffusion = calA * calA.transposed();
      spec.diffusion = spec.diffusion.scaled(0.5);
      spec.activation = act;
      const Fnn f0 = random_fnn(rng, random_arch_between(rng, d, 1, uniform_size(rng, 1, 3)));
      spec.phi0 = [f0](double) { return f0; };
      spec.phi1 = [drift](double) { return drift; };
      const std::size_t M = uniform_size(rng, 1, kMaxCopies);
      const auto est = build_estimator(spec, delta, M, seed + k);
      const auto nets = build_sample_networks(spec, delta, M, seed + k);
      const auto p_varphi = (drift.complexity() + d * d) * grid.intervals() + f0.complexity() + d;
      rec.check(nets.front().complexity() == p_varphi, "embedding.varphi.complexity");
      rec.check(est.network.complexity() <= M * M * p_varphi, "embedding.estimator.bound");
      for (std::size_t i = 0; i < 5; ++i) {
        const Vector x = random_vector(rng, d);
        double mean = 0.0;
        for (const auto& n : nets) mean += realize(n, act, x)[0];
        mean /= static_cast<double>(M);
        const Vector got = realize(est.network, act, x);
        rec.check(close(got, {mean}, kRel), "embedding.estimator.linearity", [&] { return describe(got, {mean}); });
      }
    }
    ++out.cases;
  }
}

}  // namespace

Vector random_vector(Rng& rng, std::size_t n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

Fnn random_fnn(Rng& rng, const std::vector<std::size_t>& arch, double scale) {
  if (arch.size() < 2) throw InvalidArgument("an architecture needs at least two widths");
  std::vector<Layer> layers;
  for (std::size_t k = 1; k < arch.size(); ++k) {
    layers.push_back({random_matrix(rng, arch[k], arch[k - 1], scale), random_vector(rng, arch[k], scale)});
  }
  return Fnn(std::move(layers));
}

ResNet random_resnet(Rng& rng, const std::vector<std::vector<std::size_t>>& block_archs, double scale) {
  std::vector<ResidualBlock> blocks;
  for (const auto& arch : block_archs) {
    Fnn f = random_fnn(rng, arch, scale);
    blocks.push_back({random_matrix(rng, arch.back(), arch.front(), scale), std::move(f)});
  }
  return ResNet(std::move(blocks));
}

std::vector<std::size_t> random_arch(Rng& rng, std::size_t max_width, std::size_t max_depth) {
  const std::size_t depth = uniform_size(rng, 1, max_depth);
  std::vector<std::size_t> arch(depth + 1);
  for (auto& w : arch) w = uniform_size(rng, 1, max_width);
  return arch;
}

bool close(const Vector& a, const Vector& b, double rel) {
  if (a.size() != b.size()) return false;
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(diff) <= rel * (1.0 + norm2(b));
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"fnn", "resnet", "embedding"};
  return names;
}

SuiteResult run_suite(const std::string& name, std::size_t cases, std::uint64_t seed) {
  SuiteResult out;
  out.name = name;
  const auto start = std::chrono::steady_clock::now();
  if (name == "fnn") fnn_suite(out, cases, seed);
  else if (name == "resnet") resnet_suite(out, cases, seed);
  else if (name == "embedding") embedding_suite(out, cases, seed);
  else throw InvalidArgument("unknown suite '" + name + "'");
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace kolmonet
