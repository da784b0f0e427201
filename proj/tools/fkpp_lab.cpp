#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "fkpp/config.hpp"
#include "fkpp/errors.hpp"
#include "fkpp/experiments.hpp"

using namespace fkpp;

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for fast-diffusion Fisher-KPP fronts"};
  app.require_subcommand(1);
  std::string configPath, outDir;
  std::uint64_t seed = 0;
  bool echo = false;
  app.add_option("--config", configPath, "sectioned key = value configuration file");
  auto* outOpt = app.add_option("--out", outDir, "output directory (overrides output.dir)");
  auto* seedOpt = app.add_option("--seed", seed, "seed for randomized checks (overrides run.seed)");
  app.add_flag("--echo-config", echo, "print the effective configuration and exit");

  const std::map<std::string, std::pair<Command, std::string>> simple = {
      {"evaluate", {Command::Evaluate, "dump an analytic field on the grid as r,t,u CSV"}},
      {"simulate", {Command::Simulate, "run the solver from the configured datum"}},
      {"fronts", {Command::Fronts, "run the solver and fit level-set rates or speeds"}},
      {"twspeed", {Command::TwSpeed, "travelling-wave speed by shooting (gamma >= 0)"}},
      {"verify", {Command::Verify, "comparison audits and barrier feasibility"}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : simple) subs[name] = app.add_subcommand(name, entry.second);
  auto* sweepCmd = app.add_subcommand("sweep", "run the configured preset over the [sweep] axes");
  auto* presetCmd = app.add_subcommand("preset", "run a named experiment preset");
  std::string presetName;
  presetCmd->add_option("name", presetName, "preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    LabConfig config = configPath.empty() ? LabConfig{} : load_config(configPath);
    if (*outOpt) config.outDir = outDir;
    if (*seedOpt) config.seed = seed;
    if (presetCmd->parsed()) {
      config.experiment.preset = parse_preset(presetName);
      validate_config(config);
    }
    if (echo) {
      std::cout << serialize_config(config);
      return 0;
    }
    Outcome o;
    if (sweepCmd->parsed()) {
      o = sweep(config, config.outDir);
    } else if (presetCmd->parsed()) {
      o = run_experiment(config);
    } else {
      for (const auto& [name, entry] : simple)
        if (subs[name]->parsed()) o = execute(entry.first, config, config.outDir);
    }
    std::cout << o.summary.dump(2) << "\n";
    if (o.exitCode != 0 && o.summary.contains("error"))
      std::cerr << "error: " << o.summary["error"]["message"].get<std::string>() << "\n";
    return o.exitCode;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
