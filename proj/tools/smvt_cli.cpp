// smvt: command-line front end for the intermediate-point selector.
//
//   smvt solve --fn poly:0,0,1 --a 0 --x 2 --n 1
//   smvt verify --fn sin --a 0 --n 3 --dist uniform:-1,1 --N 10000 --seed 7
//   smvt measurability --fn exp --space data/die.json
//   smvt run --config experiment.json
//
// Exit status: 0 success, 1 invalid input, 2 per-outcome solver failure.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smvt/builtins.hpp"
#include "smvt/errors.hpp"
#include "smvt/experiment.hpp"

namespace {

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::string_view rest(text);
  while (true) {
    const auto comma = rest.find(',');
    const auto tok = rest.substr(0, comma);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      throw smvt::ConfigError(flag, "expected a number or comma-separated numbers, got '" + text + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

struct Flags {
  std::string function = "exp";
  std::string anchor = "0";
  std::string increment;
  int order = 1;
  std::string variant = "sup";
  int scan_points = 4097;
  double refine_tol = 1e-12;
  double residual_tol = 1e-10;
  double verify_tol = 1e-9;
  std::uint64_t seed = 0;
  std::string distribution = "uniform:-1,1";
  std::string y_distribution;
  std::size_t count = 1000;
  std::size_t replicates = 1000;
  std::size_t sample_size = 100;
  std::string model = "bernoulli:0.3";
  double mu = 0.0;
  std::string space;
  std::string y_space;
  std::string output_dir;
  std::string prefix;
};

struct Sub {
  CLI::App* app;
  smvt::Command command;
  CLI::Option* seed = nullptr;
  CLI::Option* mu = nullptr;
};

Sub add_command(CLI::App& root, smvt::Command command, const std::string& help, Flags& f) {
  Sub sub{root.add_subcommand(smvt::to_string(command), help), command};
  auto* app = sub.app;
  app->add_option("--fn", f.function, "builtin function, e.g. poly:0,0,1, exp, sin, log:1, sqnorm:2")
      ->capture_default_str();
  app->add_option("--n", f.order, "Taylor order n (n = 1 is the mean value form)")->capture_default_str();
  app->add_option("--policy", f.variant, "selector variant")->check(CLI::IsMember({"sup", "inf"}))
      ->capture_default_str();
  app->add_option("--scan-points", f.scan_points, "scan resolution")->capture_default_str();
  app->add_option("--refine-tol", f.refine_tol, "bisection width tolerance")->capture_default_str();
  app->add_option("--residual-tol", f.residual_tol, "selector residual tolerance, relative to 1+|pi|")
      ->capture_default_str();
  app->add_option("--out", f.output_dir, "output directory (default: $SMVT_OUTPUT_DIR or .)");
  app->add_option("--prefix", f.prefix, "output file prefix (default: command name)");

  using smvt::Command;
  if (command == Command::expand || command == Command::solve || command == Command::verify ||
      command == Command::measurability) {
    app->add_option("--a", f.anchor, "anchor point, comma-separated for multivariate functions")
        ->capture_default_str();
  }
  if (command == Command::expand || command == Command::solve) {
    app->add_option("--x", f.increment, "increment, comma-separated for multivariate functions")->required();
  }
  if (smvt::is_stochastic(command)) {
    sub.seed = app->add_option("--seed", f.seed, "master seed");
  }
  if (command == Command::verify || command == Command::delta_demo || command == Command::two_rv) {
    app->add_option("--dist", f.distribution, "uniform:lo,hi | normal:m,s | bernoulli:p | exponential:r")
        ->capture_default_str();
  }
  if (command == Command::verify || command == Command::two_rv) {
    app->add_option("--N", f.count, "number of outcomes")->capture_default_str();
  }
  if (command == Command::verify || command == Command::mle_demo) {
    app->add_option("--verify-tol", f.verify_tol, "pass threshold on the relative residual")
        ->capture_default_str();
  }
  if (command == Command::mle_demo || command == Command::delta_demo) {
    app->add_option("--reps", f.replicates, "Monte Carlo replicates")->capture_default_str();
    app->add_option("--sample-size", f.sample_size, "observations per replicate")->capture_default_str();
  }
  if (command == Command::mle_demo) {
    app->add_option("--model", f.model, "bernoulli:p0 | normal:mu0[,sigma] | exponential:rate0")
        ->capture_default_str();
  }
  if (command == Command::delta_demo) {
    sub.mu = app->add_option("--mu", f.mu, "expansion point (default: mean of --dist)");
  }
  if (command == Command::measurability || command == Command::two_rv) {
    app->add_option("--space", f.space, "finite probability space JSON with X values");
  }
  if (command == Command::two_rv) {
    app->add_option("--y-space", f.y_space, "space JSON with Y values on the same outcomes");
    app->add_option("--y-dist", f.y_distribution, "distribution of Y when no space files are given");
  }
  return sub;
}

smvt::ExperimentConfig to_config(const Sub& sub, const Flags& f) {
  smvt::ExperimentConfig c;
  c.command = sub.command;
  c.function = f.function;
  c.anchor = parse_list(f.anchor, "--a");
  if (!f.increment.empty()) c.increment = parse_list(f.increment, "--x");
  c.order = f.order;
  c.policy.variant = smvt::parse_selector_variant(f.variant);
  c.policy.scan_points = f.scan_points;
  c.policy.refine_tol = f.refine_tol;
  c.policy.residual_tol = f.residual_tol;
  c.verify_tol = f.verify_tol;
  if (sub.seed && sub.seed->count() > 0) c.seed = f.seed;
  c.distribution = f.distribution;
  c.y_distribution = f.y_distribution;
  c.count = f.count;
  c.replicates = f.replicates;
  c.sample_size = f.sample_size;
  c.model = f.model;
  if (sub.mu && sub.mu->count() > 0) c.mu = f.mu;
  c.space_path = f.space;
  c.y_space_path = f.y_space;
  c.output_dir = f.output_dir;
  c.output_prefix = f.prefix;
  return c;
}

int report(const smvt::RunOutcome& outcome) {
  for (const auto& line : outcome.messages) {
    (outcome.exit_code == 1 ? std::cerr : std::cout) << line << '\n';
  }
  if (!outcome.csv_path.empty()) {
    std::cout << "wrote " << outcome.csv_path << " and " << outcome.json_path << '\n';
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intermediate-point selector for stochastic Taylor and mean value expansions"};
  app.require_subcommand(1);
  app.footer("Functions: poly:c0,c1,... exp sin cos log:c log1p sqnorm:p expdot:w1,... expxy sincos xyz");

  Flags flags;
  std::vector<Sub> subs;
  using smvt::Command;
  subs.push_back(add_command(app, Command::expand, "Taylor partial sum with Lagrange and integral remainders", flags));
  subs.push_back(add_command(app, Command::solve, "solve for the intermediate point of one increment", flags));
  subs.push_back(add_command(app, Command::verify, "solve and check the identity over seeded increments", flags));
  subs.push_back(add_command(app, Command::measurability, "check xi is sigma(X)-measurable on a finite space", flags));
  subs.push_back(add_command(app, Command::mle_demo, "score expansion around the true parameter, Monte Carlo", flags));
  subs.push_back(add_command(app, Command::delta_demo, "delta method with the intermediate point made explicit", flags));
  subs.push_back(add_command(app, Command::two_rv, "intermediate point between two random variables", flags));

  std::string config_path;
  std::string config_out;
  auto* run_cmd = app.add_subcommand("run", "run an experiment described by a JSON config file");
  run_cmd->add_option("--config", config_path, "ExperimentConfig JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", config_out, "override output_dir from the config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    smvt::ExperimentConfig config;
    if (run_cmd->parsed()) {
      std::ifstream in(config_path);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::parse_error& e) {
        throw smvt::ConfigError("$", std::string("invalid JSON: ") + e.what());
      }
      config = smvt::config_from_json(j);
      if (!config_out.empty()) config.output_dir = config_out;
    } else {
      for (const auto& sub : subs) {
        if (sub.app->parsed()) config = to_config(sub, flags);
      }
    }
    return report(smvt::run(config));
  } catch (const smvt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
