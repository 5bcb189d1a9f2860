#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "netsteer/cli/commands.hpp"
#include "netsteer/cli/config.hpp"

using namespace netsteer;
using namespace netsteer::cli;

int main(int argc, char** argv) {
  CLI::App app{"netsteer: steerability in standard and network steering scenarios"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<std::string> out;
  std::optional<std::string> engine;
  bool print_config = false;
  std::optional<double> inject_xi;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--jobs", jobs, "worker threads (0: machine parallelism)");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--engine", engine, "ann, sdp or both");
    sub->add_flag("--print-config", print_config, "print the effective configuration and exit");
  };
  auto* sweep = app.add_subcommand("sweep", "evaluate S_ann, S_lb and S_ub over a visibility grid");
  auto* thresholds = app.add_subcommand("thresholds", "bisect steering thresholds and compare to references");
  auto* verify = app.add_subcommand("verify-models", "replay the analytic (N)LHS models");
  auto* bounds = app.add_subcommand("bounds", "SDP lower and upper bounds over a visibility grid");
  for (auto* sub : {sweep, thresholds, verify, bounds}) add_common(sub);
  verify->add_option("--inject-xi", inject_xi, "replay the bilocal model at xi = zeta = X")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) config = config_from_json(read_json_file(config_path));
    if (seed) {
      config.seed = *seed;
      config.optimizer.seed = *seed;
    }
    if (jobs) config.jobs = *jobs;
    if (out) config.output_dir = *out;
    if (engine) config.engine = engine_from_string(*engine);
    if (print_config) {
      std::cout << to_json(config).dump(2) << '\n';
      return kExitOk;
    }
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*sweep) return cmd_sweep(config, std::cerr);
    if (*bounds) return cmd_bounds(config, std::cerr);
    if (*thresholds) return cmd_thresholds(config, std::cerr);
    VerifyOptions options;
    options.seed = config.seed;
    options.inject_xi = inject_xi;
    return cmd_verify_models(config, options, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
