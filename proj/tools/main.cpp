#include <exception>
#include <iostream>

#include "CLI11.hpp"

#include "entpert/cli.hpp"
#include "entpert/errors.hpp"

using entpert::cli::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{
      "entpert: zeroth-order eigenstates and entanglement of two interacting "
      "spin-1/2 fermions in a 1D confining potential"};
  app.require_subcommand(1);
  app.set_config("--config", "", "plain-text key=value run configuration; flags win");

  RunConfig config;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--potential", config.potential,
                    "confining potential: harmonic:OMEGA | table:PATH");
    cmd->add_option("--interaction", config.interaction,
                    "interaction: delta | harmonic:OMEGA | gaussian:A,S | table:PATH");
    cmd->add_option("--k-max", config.k_max, "modes solved for table potentials");
    cmd->add_option("--csv", config.csv_path, "CSV output file (default: stdout)");
  };

  auto* level = app.add_subcommand(
      "level", "zeroth-order states, energy shifts and entanglement of one degenerate level");
  add_common(level);
  level->add_option("--n", config.level_n, "level quantum number n1+n2");
  level->add_option("--json", config.json_path, "JSON output file");

  auto* bounds =
      app.add_subcommand("bounds", "entanglement ceilings N/(N+1), ln(N+1) per level");
  bounds->add_option("--n-min", config.bounds_n_min, "first level");
  bounds->add_option("--n-max", config.bounds_n_max, "last level");
  bounds->add_option("--csv", config.csv_path, "CSV output file (default: stdout)");

  auto* rcurve = app.add_subcommand(
      "rcurve", "eps_L(r), eps_vN(r) of the five-fold level's singlet branch");
  rcurve->add_option("--r-min", config.r_min, "start of the r grid");
  rcurve->add_option("--r-max", config.r_max, "end of the r grid");
  rcurve->add_option("--steps", config.r_steps, "grid steps");
  rcurve->add_option("--csv", config.csv_path, "CSV output file (default: stdout)");

  auto* sweep = app.add_subcommand(
      "sweep", "configuration-interaction lambda sweep against the zeroth-order predictions");
  add_common(sweep);
  sweep->add_option("--n", config.level_n, "target level");
  sweep->add_option("--n-max", config.ci_n_max, "CI spatial-mode cutoff");
  sweep->add_option("--lambdas", config.lambdas, "interaction strengths, descending")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(level)) return entpert::cli::cmd_level(config, std::cout);
    if (app.got_subcommand(bounds)) return entpert::cli::cmd_bounds(config, std::cout);
    if (app.got_subcommand(rcurve)) return entpert::cli::cmd_rcurve(config, std::cout);
    if (app.got_subcommand(sweep)) return entpert::cli::cmd_sweep(config, std::cout);
  } catch (const entpert::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
