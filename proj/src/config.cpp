#include "kolmonet/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "kolmonet/error.hpp"
#include "kolmonet/rng.hpp"
#include "kolmonet/serialize.hpp"
#include "kolmonet/validation.hpp"

namespace kolmonet {

namespace {

template <class T>
T get(const YAML::Node& node, const char* key, T fallback) {
  const auto v = node[key];
  return v ? v.as<T>() : fallback;
}

/// Scalar or list of numbers.
std::vector<double> numbers(const YAML::Node& node, std::vector<double> fallback) {
  if (!node) return fallback;
  if (node.IsScalar()) return {node.as<double>()};
  return node.as<std::vector<double>>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

FamilyRule parse_family(const YAML::Node& node, const char* what, const std::filesystem::path& base,
                        FamilyRule fallback) {
  if (!node) return fallback;
  FamilyRule r;
  r.kind = get<std::string>(node, "kind", "");
  if (r.kind.empty()) throw ConfigParse(std::string(what) + ": missing 'kind'");
  r.coefficients = numbers(node["coefficients"], {1.0});
  r.offset = get<double>(node, "offset", 0.0);
  r.scale = get<double>(node, "scale", 0.5);
  r.seed = get<std::uint64_t>(node, "seed", 1);
  if (node["hidden"]) r.hidden = node["hidden"].as<std::vector<std::size_t>>();
  if (node["path"]) r.path = resolve(base, node["path"].as<std::string>());
  if (node["entries"]) {
    for (const auto& e : node["entries"]) {
      r.table.emplace_back(e["delta"].as<double>(), resolve(base, e["path"].as<std::string>()));
    }
    std::sort(r.table.begin(), r.table.end());
  }
  static const char* kinds[] = {"zero", "linear", "affine", "relu", "random", "file", "per_delta"};
  if (std::find(std::begin(kinds), std::end(kinds), r.kind) == std::end(kinds)) {
    throw ConfigParse(std::string(what) + ": unknown family kind '" + r.kind + "'");
  }
  if (r.kind == "file" && r.path.empty()) throw ConfigParse(std::string(what) + ": file family needs 'path'");
  if (r.kind == "per_delta" && r.table.empty()) {
    throw ConfigParse(std::string(what) + ": per_delta family needs 'entries'");
  }
  return r;
}

template <class T>
std::vector<T> grid(const YAML::Node& node, const char* key) {
  const auto v = node[key];
  if (!v) throw ConfigParse(std::string("study: missing '") + key + "'");
  auto out = v.IsScalar() ? std::vector<T>{v.as<T>()} : v.as<std::vector<T>>();
  if (out.empty()) throw ConfigParse(std::string("study: '") + key + "' is empty");
  return out;
}

Config parse_node(const YAML::Node& root, const std::filesystem::path& base) {
  Config c;
  const auto problem = root["problem"];
  if (!problem) throw ConfigParse("missing 'problem' section");
  c.d = get<std::size_t>(problem, "d", 1);
  c.horizon = get<double>(problem, "T", 1.0);
  c.kappa = get<double>(problem, "kappa", 1.0);
  c.eta = get<double>(problem, "eta", 1.0);
  c.p = get<double>(problem, "p", 2.0);
  c.activation = get<std::string>(problem, "activation", "relu");
  (void)Activation::from_name(c.activation);
  if (c.d == 0) throw ConfigParse("problem.d must be positive");
  if (!(c.horizon > 0.0)) throw ConfigParse("problem.T must be positive");

  if (const auto diff = problem["diffusion"]) {
    c.diffusion.kind = get<std::string>(diff, "kind", "scalar");
    c.diffusion.values = numbers(diff["values"] ? diff["values"] : diff["value"], {0.5});
    if (c.diffusion.kind != "scalar" && c.diffusion.kind != "diag" && c.diffusion.kind != "dense") {
      throw ConfigParse("problem.diffusion: unknown kind '" + c.diffusion.kind + "'");
    }
  }
  c.phi0 = parse_family(problem["phi0"], "problem.phi0", base, c.phi0);
  c.phi1 = parse_family(problem["phi1"], "problem.phi1", base, c.phi1);
  if (const auto nu = problem["nu"]) {
    const auto kind = get<std::string>(nu, "kind", "gaussian");
    if (kind == "gaussian") c.nu = SamplingMeasure::gaussian();
    else if (kind == "uniform") c.nu = SamplingMeasure::uniform(get<double>(nu, "lower", -1.0), get<double>(nu, "upper", 1.0));
    else throw ConfigParse("problem.nu: unknown kind '" + kind + "'");
  }
  if (problem["f1_norm_at_0"]) c.f1_norm_at_0 = problem["f1_norm_at_0"].as<double>();

  if (const auto ref = root["reference"]) {
    c.reference.kind = get<std::string>(ref, "kind", "none");
    if (c.reference.kind != "none") (void)reference_kind_from_name(c.reference.kind);
    c.reference.coefficients = numbers(ref["coefficients"], {1.0});
    c.reference.offset = get<double>(ref, "offset", 0.0);
    c.reference.drift = numbers(ref["drift"], {0.0});
    if (ref["sigma"]) c.reference.sigma = ref["sigma"].as<double>();
  }

  if (const auto build = root["build"]) {
    c.delta = get<double>(build, "delta", c.delta);
    c.samples = get<std::size_t>(build, "samples", c.samples);
    c.max_parameters = get<double>(build, "max_parameters", c.max_parameters);
  }
  c.seed = get<std::uint64_t>(root, "seed", c.seed);
  if (const auto ev = root["eval"]) {
    if (ev["points"]) c.eval_points = ev["points"].as<std::vector<std::vector<double>>>();
  }
  if (const auto v = root["validate"]) c.validate_cases = get<std::size_t>(v, "cases", c.validate_cases);

  if (const auto s = root["study"]) {
    c.study.epsilon_grid = grid<double>(s, "epsilon_grid");
    c.study.d_grid = grid<std::size_t>(s, "d_grid");
    c.study.delta_grid = grid<double>(s, "delta_grid");
    c.study.m_grid = grid<std::size_t>(s, "M_grid");
    c.study.seeds = grid<std::uint64_t>(s, "seeds");
    c.study.n_eval_points = get<std::size_t>(s, "n_eval_points", 200);
    c.study.p = get<double>(s, "p", c.p);
    c.study.output_path = resolve(base, get<std::string>(s, "output_path", "study_out"));
    for (double e : c.study.epsilon_grid) {
      if (!(e > 0.0 && e <= 1.0)) throw ConfigParse("study: epsilon values must lie in (0, 1]");
    }
    for (double dl : c.study.delta_grid) {
      if (!(dl > 0.0 && dl <= 1.0)) throw ConfigParse("study: delta values must lie in (0, 1]");
    }
    for (auto d : c.study.d_grid) {
      if (d == 0) throw ConfigParse("study: dimensions must be positive");
    }
    for (auto m : c.study.m_grid) {
      if (m == 0) throw ConfigParse("study: sample counts must be positive");
    }
  }
  if (!(c.delta > 0.0 && c.delta <= 1.0)) throw ConfigParse("build.delta must lie in (0, 1]");
  if (c.samples == 0) throw ConfigParse("build.samples must be positive");
  return c;
}

Vector broadcast(const std::vector<double>& v, std::size_t d, const char* what) {
  if (v.size() == 1) return Vector(d, v[0]);
  if (v.size() != d) {
    throw ConfigParse(std::string(what) + ": expected 1 or " + std::to_string(d) + " values, got " +
                      std::to_string(v.size()));
  }
  return v;
}

Fnn load_network(const std::filesystem::path& path, std::size_t d, std::size_t out_dim) {
  Fnn net = load_fnn(path);
  if (net.input_dim() != d || net.output_dim() != out_dim) {
    throw ConfigParse(path.string() + ": network maps " + std::to_string(net.input_dim()) + " -> " +
                      std::to_string(net.output_dim()) + ", expected " + std::to_string(d) + " -> " +
                      std::to_string(out_dim));
  }
  return net;
}

}  // namespace

Config parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  try {
    return parse_node(YAML::Load(text), base_dir);
  } catch (const YAML::Exception& e) {
    throw ConfigParse(std::string("YAML: ") + e.what());
  } catch (const ConfigParse&) {
    throw;
  } catch (const Error& e) {
    throw ConfigParse(e.what());
  }
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParse(path.string() + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    Config c = parse_config(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
    c.source = path;
    return c;
  } catch (const ConfigParse& e) {
    throw ConfigParse(path.string() + ": " + e.what());
  }
}

Matrix make_diffusion(const DiffusionRule& rule, std::size_t d) {
  if (rule.kind == "dense") {
    if (rule.values.size() != d * d) {
      throw ConfigParse("dense diffusion needs " + std::to_string(d * d) + " values for d = " + std::to_string(d));
    }
    return Matrix(d, d, rule.values);
  }
  if (rule.kind == "scalar" && rule.values.size() != 1) throw ConfigParse("scalar diffusion needs one value");
  const Vector diag = broadcast(rule.values, d, "diffusion");
  return Matrix::diagonal(diag);
}

FnnFamily make_family(const FamilyRule& rule, std::size_t d, std::size_t out_dim) {
  if (rule.kind == "zero") {
    Fnn net({Layer{Matrix(out_dim, d), Vector(out_dim, 0.0)}});
    return [net](double) { return net; };
  }
  if (rule.kind == "linear" || rule.kind == "affine") {
    const double offset = rule.kind == "affine" ? rule.offset : 0.0;
    const Vector c = broadcast(rule.coefficients, d, "family coefficients");
    Matrix w = out_dim == 1 ? Matrix(1, d, c) : Matrix::diagonal(c);
    if (out_dim != 1 && out_dim != d) throw ConfigParse("affine family output must be 1 or d");
    Fnn net({Layer{std::move(w), Vector(out_dim, offset)}});
    return [net](double) { return net; };
  }
  if (rule.kind == "relu") {
    if (out_dim != 1) throw ConfigParse("relu family is scalar-valued");
    const Vector c = broadcast(rule.coefficients, d, "family coefficients");
    Fnn net({Layer{Matrix(1, d, c), Vector{rule.offset}}, Layer{Matrix::identity(1), Vector{0.0}}});
    return [net](double) { return net; };
  }
  if (rule.kind == "random") {
    Rng rng(stream_key({rule.seed, d, out_dim}));
    std::vector<std::size_t> arch{d};
    arch.insert(arch.end(), rule.hidden.begin(), rule.hidden.end());
    arch.push_back(out_dim);
    Fnn net = random_fnn(rng, arch, rule.scale);
    return [net](double) { return net; };
  }
  if (rule.kind == "file") {
    Fnn net = load_network(rule.path, d, out_dim);
    return [net](double) { return net; };
  }
  if (rule.kind == "per_delta") {
    std::vector<std::pair<double, Fnn>> nets;
    for (const auto& [delta, path] : rule.table) nets.emplace_back(delta, load_network(path, d, out_dim));
    std::sort(nets.begin(), nets.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return [nets](double delta) {
      const Fnn* pick = &nets.front().second;
      for (const auto& [listed, net] : nets) {
        if (listed <= delta) pick = &net;
      }
      return *pick;
    };
  }
  throw ConfigParse("unknown family kind '" + rule.kind + "'");
}

ProblemSpec make_problem(const Config& config, std::size_t d) {
  ProblemSpec spec;
  spec.d = d;
  spec.horizon = config.horizon;
  spec.kappa = config.kappa;
  spec.eta = config.eta;
  spec.p = config.p;
  spec.activation = Activation::from_name(config.activation);
  spec.diffusion = make_diffusion(config.diffusion, d);
  spec.phi0 = make_family(config.phi0, d, 1);
  spec.phi1 = make_family(config.phi1, d, d);
  spec.nu = config.nu;
  spec.f1_norm_at_0 = config.f1_norm_at_0;
  try {
    spec.validate();
  } catch (const Error& e) {
    throw ConfigParse(std::string("problem (d = ") + std::to_string(d) + "): " + e.what());
  }
  return spec;
}

std::optional<ReferenceSolution> make_reference(const Config& config, std::size_t d, double delta) {
  const auto& r = config.reference;
  if (r.kind == "none") return std::nullopt;
  const auto kind = reference_kind_from_name(r.kind);
  using Kind = ReferenceSolution::Kind;
  if (kind == Kind::relu_gaussian_1d) {
    if (d != 1) throw ConfigParse("relu_gaussian_1d reference needs d = 1");
    const Matrix a = make_diffusion(config.diffusion, 1);
    return ReferenceSolution::relu_gaussian_1d(r.sigma.value_or(std::sqrt(2.0 * a.entry(0, 0))));
  }
  Vector c = broadcast(r.coefficients, d, "reference coefficients");
  if (kind == Kind::affine_no_drift) return ReferenceSolution::affine_no_drift(std::move(c), r.offset);
  Matrix g = Matrix::diagonal(broadcast(r.drift, d, "reference drift"));
  if (kind == Kind::affine_linear_drift) {
    return ReferenceSolution::affine_linear_drift(std::move(c), r.offset, std::move(g));
  }
  return ReferenceSolution::discrete_affine_recursion(std::move(c), r.offset, std::move(g), delta);
}

}  // namespace kolmonet
