#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "fkpp/config.hpp"
#include "fkpp/output.hpp"

namespace fkpp {

enum class Command { Evaluate, Simulate, Fronts, TwSpeed, Verify, Preset };

const char* to_string(Command command);

struct Outcome {
  int exitCode = 0;  // 0 ok, 2 config error, 3 numeric failure, 4 audit failure
  Json summary;      // also written to summary.json
};

RadialGrid grid_of(const LabConfig& config);
std::function<double(double)> datum_of(const LabConfig& config);

// Runs one command into outDir: config.txt, the command artifacts, summary.json, error.json on
// failure, and manifest.json listing every file with its hash. Never throws for module errors.
Outcome execute(Command command, const LabConfig& config, const std::filesystem::path& outDir);

// The configured preset into config.outDir.
Outcome run_experiment(const LabConfig& config);

struct SweepCell {
  LabConfig config;
  std::string dir;  // relative to the sweep root
};

// Cartesian product of the non-empty axes over the template; empty axes keep the template value.
std::vector<SweepCell> sweep_cells(const LabConfig& tmpl);

// One preset run per cell under outDir/cells, run on config.workers threads, plus sweep.csv with one
// row per cell in cell order. Failed cells keep their row with status and error text.
Outcome sweep(const LabConfig& tmpl, const std::filesystem::path& outDir);

}  // namespace fkpp
