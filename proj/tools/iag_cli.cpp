#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "iag/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Incremental aggregated gradient solvers with convergence certificates"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;

  const auto add_common = [&](CLI::App* cmd, bool with_out) {
    cmd->add_option("--config", config_path, "experiment config file")
        ->required();
    if (with_out)
      cmd->add_option("--out", out_dir, "directory for output files");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { seed_override = v; },
        "override the config seed");
  };

  CLI::App* run_cmd =
      app.add_subcommand("run", "run one experiment; write trace CSV + report JSON");
  add_common(run_cmd, true);

  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "run several methods on one problem; combined CSV + report");
  add_common(compare_cmd, true);

  CLI::App* gradcheck_cmd = app.add_subcommand(
      "gradcheck", "finite-difference check of the configured problem's oracles");
  add_common(gradcheck_cmd, false);

  double mu = 0, lipschitz = 0;
  int delay_bound = 0;
  std::optional<double> gamma;
  CLI::App* certify_cmd = app.add_subcommand(
      "certify", "print the stepsize/rate certificate for (mu, L, K) as JSON");
  certify_cmd->add_option("--mu", mu, "strong convexity constant")->required();
  certify_cmd->add_option("--L", lipschitz, "gradient Lipschitz constant")
      ->required();
  certify_cmd->add_option("--K", delay_bound, "delay bound")->required();
  certify_cmd->add_option_function<double>(
      "--gamma", [&](double v) { gamma = v; },
      "stepsize to evaluate (default gamma_star)");

  CLI::App* suite_cmd =
      app.add_subcommand("suite", "run the full certification suite");

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed())
    return iag::cmd_run(config_path, out_dir, seed_override, std::cout,
                        std::cerr);
  if (compare_cmd->parsed())
    return iag::cmd_compare(config_path, out_dir, seed_override, std::cout,
                            std::cerr);
  if (gradcheck_cmd->parsed())
    return iag::cmd_gradcheck(config_path, seed_override, std::cout, std::cerr);
  if (certify_cmd->parsed())
    return iag::cmd_certify(mu, lipschitz, delay_bound, gamma, std::cout,
                            std::cerr);
  if (suite_cmd->parsed()) return iag::cmd_suite(std::cout);
  return iag::kBadConfig;
}
