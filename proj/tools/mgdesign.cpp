#include "mgdesign/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Multi-microgrid price and dispatch design"};
  app.require_subcommand(1);

  mgdesign::RunManifest manifest;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-s,--scenario", manifest.scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", manifest.seed, "Run seed")->capture_default_str();
    cmd->add_option("--horizon", manifest.horizon, "Override the scenario horizon");
    cmd->add_option("-o,--out", manifest.output_dir, "Output directory")->capture_default_str();
  };

  auto* simulate = app.add_subcommand("simulate", "Run the closed-loop simulation and write the trace");
  add_common(simulate);
  simulate->add_flag("--dump-front", manifest.dump_front, "Write every step's archive as front_kNNN.jsonl");
  simulate->add_flag("--verify", manifest.verify, "Also run the oracle checks on the first step");

  auto* verify = app.add_subcommand("verify", "Oracle checks on the first step of a scenario");
  add_common(verify);

  auto* solve = app.add_subcommand("solve", "Solve one step from the initial storage levels");
  add_common(solve);
  solve->add_option("--step", manifest.step, "Step index")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) return mgdesign::cmd_simulate(manifest, std::cout, std::cerr);
  if (verify->parsed()) return mgdesign::cmd_verify(manifest, std::cout, std::cerr);
  return mgdesign::cmd_solve(manifest, std::cout, std::cerr);
}
