// kolmonet: validate | build | eval | study
//
// Exit codes: 0 success, 1 test failure, 2 configuration or input error.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kolmonet/error.hpp"
#include "kolmonet/harness.hpp"

namespace {

kolmonet::Vector parse_point(const std::string& text) {
  kolmonet::Vector x;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      x.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw kolmonet::ConfigParse("bad coordinate '" + item + "' in --point");
    }
  }
  return x;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Residual-network Monte Carlo estimators for Kolmogorov PDEs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out = "out";
  std::uint64_t seed = 0;
  std::string suite;
  double delta = 0.0;
  std::size_t samples = 0;
  double epsilon = 0.0;
  std::string network;
  std::vector<std::string> points;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "YAML problem configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--seed", seed, "Override the configured seed");
  };
  auto* validate = app.add_subcommand("validate", "Run the property-test battery");
  common(validate);
  validate->add_option("--suite", suite, "Run one suite: fnn | resnet | embedding");

  auto* build = app.add_subcommand("build", "Build the estimator network and its complexity report");
  common(build);
  build->add_option("--delta", delta, "Step parameter; the step size is delta^2");
  build->add_option("--samples,-M", samples, "Monte Carlo sample count");
  build->add_option("--epsilon", epsilon, "Use the formula-scaled (M, delta) for this accuracy");

  auto* eval = app.add_subcommand("eval", "Evaluate a built estimator");
  common(eval);
  eval->add_option("--network", network, "Estimator JSON (default: <out>/estimator.json)");
  eval->add_option("--point", points, "Evaluation point as comma-separated coordinates");
  eval->add_option("--delta", delta, "Grid for the discrete reference");

  auto* study = app.add_subcommand("study", "Run the configured convergence and scaling study");
  common(study);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kolmonet::kExitConfigError;
  }

  try {
    const kolmonet::Config config = kolmonet::load_config(config_path);
    kolmonet::CommandOptions opts;
    opts.out = out;
    for (auto* sub : app.get_subcommands()) {
      if (sub->count("--seed")) opts.seed = seed;
      if (sub->get_option_no_throw("--suite") && sub->count("--suite")) opts.suite = suite;
      if (sub->get_option_no_throw("--delta") && sub->count("--delta")) opts.delta = delta;
      if (sub->get_option_no_throw("--samples") && sub->count("--samples")) opts.samples = samples;
      if (sub->get_option_no_throw("--epsilon") && sub->count("--epsilon")) opts.epsilon = epsilon;
    }
    opts.network = network;
    for (const auto& p : points) opts.points.push_back(parse_point(p));

    if (validate->parsed()) return kolmonet::cmd_validate(config, opts, std::cout);
    if (build->parsed()) return kolmonet::cmd_build(config, opts, std::cout);
    if (eval->parsed()) return kolmonet::cmd_eval(config, opts, std::cout);
    if (study->parsed()) {
      if (!study->count("--out")) opts.out.clear();
      return kolmonet::cmd_study(config, opts, std::cout);
    }
  } catch (const kolmonet::NotMaterializable& e) {
    std::cerr << "not materializable: " << e.what() << "\n";
    return kolmonet::kExitConfigError;
  } catch (const kolmonet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kolmonet::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kolmonet::kExitTestFailure;
  }
  return kolmonet::kExitOk;
}
