#include "kolmonet/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <tuple>
#include <sstream>

#include "kolmonet/error.hpp"
#include "kolmonet/serialize.hpp"
#include "kolmonet/validation.hpp"

namespace kolmonet {

namespace {

using nlohmann::json;

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string wide_cell(const Wide& v) {
  if (v == boost::multiprecision::floor(v) && v >= 0 && v < Wide(1e15)) {
    return std::to_string(static_cast<std::uint64_t>(v));
  }
  return to_string(v, 12);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

ScalarField reference_field(const ReferenceSolution& ref, double horizon) {
  return [ref, horizon](std::span<const double> x) { return closed_form(ref, horizon, x); };
}

}  // namespace

nlohmann::json wide_to_json(const Wide& x) {
  if (x == boost::multiprecision::floor(x) && x >= 0 && x < Wide(9.0e15)) {
    return static_cast<std::uint64_t>(x);
  }
  return to_string(x, 20);
}

nlohmann::json to_json(const ComplexityReport& r) {
  json j;
  j["d"] = r.d;
  j["epsilon"] = r.epsilon;
  j["M"] = wide_to_json(r.M);
  j["delta"] = to_string(r.delta, 20);
  j["p_phi0"] = wide_to_json(r.p_phi0);
  j["p_phi1"] = wide_to_json(r.p_phi1);
  j["steps"] = wide_to_json(r.steps);
  j["p_psi_block"] = wide_to_json(r.p_psi_block);
  j["p_varphi"] = wide_to_json(r.p_varphi);
  j["p_Psi"] = wide_to_json(r.p_Psi);
  j["bound_g_h"] = wide_to_json(r.bound_g_h);
  j["bound_final"] = r.bound_final ? wide_to_json(*r.bound_final) : json(nullptr);
  j["user_scaled"] = r.user_scaled;
  j["materializable"] = r.materializable;
  if (!r.chain.empty()) {
    json chain = json::array();
    for (const auto& line : r.chain) chain.push_back({{"line", line.label}, {"value", to_string(line.value, 20)}});
    j["chain"] = chain;
    j["chain_monotone"] = chain_monotone(r);
  }
  if (r.final_monomial) {
    j["final_bound"] = {{"constant", to_string(r.final_monomial->coef, 20)},
                        {"d_exponent", r.final_monomial->d_exp},
                        {"epsilon_exponent", r.final_monomial->eps_exp}};
  }
  return j;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs >= 2 paired values");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw InvalidArgument("slope fit needs distinct x values");
  return sxy / sxx;
}

ResultRow run_grid_point(const Config& config, std::size_t d, double delta, std::size_t samples,
                         std::uint64_t seed, std::size_t n_eval_points, double p) {
  const auto start = std::chrono::steady_clock::now();
  const ProblemSpec spec = make_problem(config, d);
  const auto ref = make_reference(config, d, delta);
  if (!ref) throw ConfigParse("a study needs a 'reference' section");
  const auto predicted = predict_complexity(spec, delta, Wide(samples));
  if (predicted.p_Psi > Wide(config.max_parameters)) {
    throw NotMaterializable("grid point d = " + std::to_string(d) + ", M = " + std::to_string(samples) +
                            " needs " + to_string(predicted.p_Psi, 6) + " parameters");
  }
  const Estimator est = build_estimator(spec, delta, samples, seed);
  const LpError err = lp_error(est.network, spec.activation, reference_field(*ref, spec.horizon), spec.nu, p,
                               n_eval_points, seed);
  ResultRow row;
  row.d = d;
  row.delta = delta;
  row.samples = samples;
  row.seed = seed;
  row.lp_error = err.estimate;
  row.ci_halfwidth = err.halfwidth;
  row.p_Psi = est.network.complexity();
  row.predicted_p = predicted.p_Psi;
  row.bound_g_h = predicted.bound_g_h;
  row.user_scaled = true;
  row.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

int cmd_validate(const Config& config, const CommandOptions& opts, std::ostream& log) {
  (void)make_problem(config, config.d);
  const std::uint64_t seed = opts.seed.value_or(config.seed);
  std::vector<std::string> names = suite_names();
  if (opts.suite) {
    if (std::find(names.begin(), names.end(), *opts.suite) == names.end()) {
      throw ConfigParse("unknown suite '" + *opts.suite + "'");
    }
    names = {*opts.suite};
  }
  json report;
  report["seed"] = seed;
  report["suites"] = json::array();
  bool all = true;
  for (const auto& name : names) {
    const SuiteResult r = run_suite(name, config.validate_cases, seed);
    all = all && r.passed();
    json failures = json::array();
    for (const auto& f : r.failures) failures.push_back({{"check", f.check}, {"detail", f.detail}});
    report["suites"].push_back({{"name", r.name},
                                {"cases", r.cases},
                                {"checks", r.checks},
                                {"passed", r.passed()},
                                {"failures", failures},
                                {"seconds", r.seconds}});
    log << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.cases << " cases, " << r.checks << " checks";
    if (!r.passed()) log << ", first failure " << r.failures.front().check << " (" << r.failures.front().detail << ")";
    log << "\n";
  }
  report["passed"] = all;
  save_json(opts.out / "validate_report.json", report);
  return all ? kExitOk : kExitTestFailure;
}

int cmd_build(const Config& config, const CommandOptions& opts, std::ostream& log) {
  const std::uint64_t seed = opts.seed.value_or(config.seed);
  const ProblemSpec spec = make_problem(config, config.d);
  const Wide budget(config.max_parameters);

  std::optional<ComplexityReport> formula;
  double delta = opts.delta.value_or(config.delta);
  std::size_t samples = opts.samples.value_or(config.samples);
  if (opts.epsilon) {
    formula = complexity_budget(spec, *opts.epsilon, budget);
    save_json(opts.out / "report.json", to_json(*formula));
    if (!formula->materializable) {
      throw NotMaterializable("epsilon = " + num(*opts.epsilon) + " needs M = " + to_string(formula->M, 6) +
                              ", delta = " + to_string(formula->delta, 6) + ", P(Psi) = " +
                              to_string(formula->p_Psi, 6) + " > budget " + to_string(budget, 6));
    }
    delta = static_cast<double>(formula->delta);
    samples = static_cast<std::size_t>(formula->M);
  }
  const ComplexityReport predicted = predict_complexity(spec, delta, Wide(samples));
  if (predicted.p_Psi > budget) {
    throw NotMaterializable("M = " + std::to_string(samples) + ", delta = " + num(delta) + " needs P(Psi) = " +
                            to_string(predicted.p_Psi, 6) + " > budget " + to_string(budget, 6));
  }

  Estimator est = build_estimator(spec, delta, samples, seed);
  if (formula) {
    est.report.user_scaled = false;
    est.report.epsilon = formula->epsilon;
    est.report.chain = formula->chain;
    est.report.bound_final = formula->bound_final;
    est.report.final_monomial = formula->final_monomial;
  }
  save_json(opts.out / "estimator.json", to_json(est.network));
  save_json(opts.out / "report.json", to_json(est.report));
  log << "built estimator: d = " << spec.d << ", delta = " << num(delta) << ", M = " << samples
      << ", blocks = " << est.network.length() << ", P(Psi) = " << est.network.complexity()
      << ", M^2 P(varphi) = " << wide_cell(est.report.bound_g_h) << "\n";
  return kExitOk;
}

int cmd_eval(const Config& config, const CommandOptions& opts, std::ostream& log) {
  const auto path = opts.network.empty() ? opts.out / "estimator.json" : opts.network;
  const ResNet net = load_resnet(path);
  const Activation act = Activation::from_name(config.activation);
  const std::size_t d = net.input_dim();
  const double delta = opts.delta.value_or(config.delta);
  const auto ref = make_reference(config, d, delta);

  std::vector<Vector> points = !opts.points.empty() ? opts.points : config.eval_points;
  if (points.empty()) points.push_back(Vector(d, 0.0));
  auto csv = open_out(opts.out / "eval.csv");
  csv << "index,x,value,reference,difference\n";
  json doc;
  doc["points"] = json::array();
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].size() != d) {
      throw ConfigParse("evaluation point " + std::to_string(k) + " has dimension " +
                        std::to_string(points[k].size()) + ", network expects " + std::to_string(d));
    }
    const double value = realize(net, act, points[k])[0];
    std::string xs;
    for (std::size_t j = 0; j < d; ++j) xs += (j ? ";" : "") + num(points[k][j]);
    csv << k << "," << xs << "," << num(value);
    json row{{"x", points[k]}, {"value", value}};
    log << "x = [" << xs << "] -> " << num(value);
    if (ref) {
      const double u = closed_form(*ref, config.horizon, points[k]);
      csv << "," << num(u) << "," << num(value - u);
      row["reference"] = u;
      log << " (reference " << num(u) << ")";
    } else {
      csv << ",,";
    }
    csv << "\n";
    log << "\n";
    doc["points"].push_back(row);
  }
  if (ref) {
    const std::size_t n = std::max<std::size_t>(config.study.n_eval_points, 100);
    const LpError err = lp_error(net, act, reference_field(*ref, config.horizon), config.nu, config.p, n,
                                 opts.seed.value_or(config.seed));
    doc["lp_error"] = {{"p", config.p}, {"estimate", err.estimate}, {"ci_halfwidth", err.halfwidth}, {"n", n}};
    log << "L^" << num(config.p) << "(nu) error: " << num(err.estimate) << " +- " << num(err.halfwidth) << "\n";
  }
  save_json(opts.out / "eval.json", doc);
  return kExitOk;
}

int cmd_study(const Config& config, const CommandOptions& opts, std::ostream& log) {
  const StudyConfig& s = config.study;
  if (s.epsilon_grid.empty() || s.d_grid.empty() || s.delta_grid.empty() || s.m_grid.empty() || s.seeds.empty()) {
    throw ConfigParse("study grids must be non-empty");
  }
  const auto dir = opts.out.empty() ? s.output_path : opts.out;
  std::vector<std::uint64_t> seeds = s.seeds;
  if (opts.seed) seeds = {*opts.seed};

  // Grid points in fixed order: d, delta, M, seed.
  std::vector<ResultRow> rows;
  for (auto d : s.d_grid) {
    for (double delta : s.delta_grid) {
      for (auto m : s.m_grid) {
        for (auto seed : seeds) rows.push_back(run_grid_point(config, d, delta, m, seed, s.n_eval_points, s.p));
      }
    }
  }
  for (const auto& r : rows) {
    if (Wide(r.p_Psi) != r.predicted_p) throw std::logic_error("emitted P(Psi) disagrees with its formula");
  }

  auto results = open_out(dir / "results.csv");
  results << "d,delta,M,seed,lp_error,ci_halfwidth,p_Psi,predicted_p,bound_g_h,user_scaled,wall_time_seconds\n";
  for (const auto& r : rows) {
    results << r.d << "," << num(r.delta) << "," << r.samples << "," << r.seed << "," << num(r.lp_error) << ","
            << num(r.ci_halfwidth) << "," << r.p_Psi << "," << wide_cell(r.predicted_p) << ","
            << wide_cell(r.bound_g_h) << "," << (r.user_scaled ? "true" : "false") << ","
            << num(r.wall_time_seconds) << "\n";
  }

  // Root-mean-square error over seeds per grid point.
  std::map<std::tuple<std::size_t, double, std::size_t>, std::vector<double>> errors;
  std::map<std::tuple<std::size_t, double, std::size_t>, ParamCount> counts;
  for (const auto& r : rows) {
    errors[{r.d, r.delta, r.samples}].push_back(r.lp_error);
    counts[{r.d, r.delta, r.samples}] = r.p_Psi;
  }
  const auto d0 = s.d_grid.front();
  const double delta0 = s.delta_grid.front();
  const auto m0 = s.m_grid.front();
  const auto m_last = s.m_grid.back();

  json slopes;
  {
    auto out = open_out(dir / "error_vs_M.csv");
    out << "d,delta,M,rms_lp_error,seeds\n";
    std::vector<double> lx, ly;
    for (auto m : s.m_grid) {
      const auto& e = errors[{d0, delta0, m}];
      out << d0 << "," << num(delta0) << "," << m << "," << num(rms(e)) << "," << e.size() << "\n";
      lx.push_back(std::log(static_cast<double>(m)));
      ly.push_back(std::log(rms(e)));
    }
    if (s.m_grid.size() >= 2) slopes["error_vs_M"] = fit_slope(lx, ly);
  }
  {
    auto out = open_out(dir / "error_vs_delta.csv");
    out << "d,delta,M,rms_lp_error,seeds\n";
    std::vector<double> lx, ly;
    for (double delta : s.delta_grid) {
      const auto& e = errors[{d0, delta, m_last}];
      out << d0 << "," << num(delta) << "," << m_last << "," << num(rms(e)) << "," << e.size() << "\n";
      lx.push_back(std::log(delta));
      ly.push_back(std::log(rms(e)));
    }
    if (s.delta_grid.size() >= 2) slopes["error_vs_delta"] = fit_slope(lx, ly);
  }
  {
    auto out = open_out(dir / "complexity_vs_d.csv");
    out << "d,delta,M,p_Psi,p_phi1,log_d,log_p_Psi\n";
    std::vector<double> lx, ly, lphi;
    for (auto d : s.d_grid) {
      const ParamCount p = counts[{d, delta0, m0}];
      const ParamCount p1 = make_problem(config, d).phi1(delta0).complexity();
      out << d << "," << num(delta0) << "," << m0 << "," << p << "," << p1 << "," << num(std::log(double(d))) << ","
          << num(std::log(double(p))) << "\n";
      lx.push_back(std::log(static_cast<double>(d)));
      ly.push_back(std::log(static_cast<double>(p)));
      lphi.push_back(std::log(static_cast<double>(p1)));
    }
    if (s.d_grid.size() >= 2) {
      slopes["p_Psi_vs_d"] = fit_slope(lx, ly);
      slopes["p_phi1_vs_d"] = fit_slope(lx, lphi);
    }
  }
  {
    auto out = open_out(dir / "budget.csv");
    out << "d,epsilon,status,M,delta,p_Psi,bound_g_h,bound_final,chain_monotone,materializable\n";
    for (auto d : s.d_grid) {
      const ProblemSpec spec = make_problem(config, d);
      for (double eps : s.epsilon_grid) {
        out << d << "," << num(eps) << ",";
        try {
          const auto r = complexity_budget(spec, eps, Wide(config.max_parameters));
          out << "ok," << wide_cell(r.M) << "," << to_string(r.delta, 12) << "," << wide_cell(r.p_Psi) << ","
              << wide_cell(r.bound_g_h) << "," << wide_cell(*r.bound_final) << ","
              << (chain_monotone(r) ? "true" : "false") << "," << (r.materializable ? "true" : "false") << "\n";
        } catch (const AssumptionViolated&) {
          out << "assumption_violated,,,,,,,\n";
        }
      }
    }
  }
  save_json(dir / "slopes.json", slopes);
  for (const auto& [name, value] : slopes.items()) log << "slope " << name << " = " << num(value.get<double>()) << "\n";
  log << "study: " << rows.size() << " grid points written to " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace kolmonet
