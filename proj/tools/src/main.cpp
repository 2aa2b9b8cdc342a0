#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "furry_cli/commands.hpp"
#include "furry_cli/config.hpp"

int main(int argc, char** argv) {
  using namespace furry::cli;
  CLI::App app{"Block-diagonalized Dirac-Coulomb operators in the Furry picture"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, output;
  int threads = 1;
  long long seed = 0;
  bool seed_set = false;
  app.add_option("--config", config_path, "Configuration file (key = value)");
  app.add_option("--output", output, "Output directory (overrides output_dir)");
  app.add_option("--threads", threads, "Worker threads across coupling values")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for randomized checks")->each([&](const std::string&) { seed_set = true; });
  for (const char* name : {"validate", "one-particle", "converge", "nbody"}) app.add_subcommand(name);
  app.get_subcommand("validate")->description("Check the installation against analytic oracles");
  app.get_subcommand("one-particle")->description("Spectra, decoupling residuals and inequality checks per coupling");
  app.get_subcommand("converge")->description("Convergence of the truncated expansions to the exact operator");
  app.get_subcommand("nbody")->description("N-particle spectra and inequality diagnostics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  RunConfig cfg;
  try {
    cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!output.empty()) cfg.output_dir = output;
    if (seed_set) cfg.seed = seed;
    validate_config(cfg);
  } catch (const furry::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigFailure;
  }
  CommandOptions opt;
  opt.threads = threads;
  return run_command(app.get_subcommands().front()->get_name(), cfg, opt);
}
