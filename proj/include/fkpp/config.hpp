#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fkpp/model_params.hpp"
#include "fkpp/pde_solver.hpp"

namespace fkpp {

enum class Preset { OuterDecay, InnerLevelsets, BandSigmaStar, SlowControl, PlapAppendix, CriticalExplore };

const char* to_string(Preset preset);
Preset parse_preset(const std::string& name);  // throws ConfigError
const std::vector<Preset>& all_presets();
// Result of the underlying theory that the preset probes; written into the manifest.
const char* preset_target(Preset preset);

enum class DatumKind { PlateauTail, Compact, Barenblatt };

const char* to_string(DatumKind kind);

struct DatumSpec {
  DatumKind kind = DatumKind::PlateauTail;
  double epsTilde = 0.5;   // plateau height
  double rhoTilde0 = 1.0;  // plateau radius
  double height = 1.0;     // compact
  double radius = 1.0;     // compact
  double mass = 1.0;       // Barenblatt
  double t0 = 1.0;         // Barenblatt start time
};

enum class FieldKind { Barenblatt, Bernoulli, KingMcCabe, PseudoBarenblatt, TypeII, CriticalTail };

const char* to_string(FieldKind kind);

struct EvaluateSpec {
  FieldKind field = FieldKind::Barenblatt;
  double mass = 1.0;  // Barenblatt
  double a = 1.0;     // Bernoulli amplitude, King-McCabe aHat
  double D = 1.0;     // pseudo-Barenblatt, type II
  double tc = 1.0;    // type II extinction time
  std::vector<double> times{1.0};
};

struct ExperimentSpec {
  Preset preset = Preset::BandSigmaStar;
  std::vector<double> omegas{0.1, 0.5, 0.9};
  double sigmaOuter = 1.5;  // outer_decay: sigma / sigma*, above 1
  double sigmaInner = 0.5;  // inner_levelsets: sigma / sigma*, in (0,1)
  int jMax = 3;             // inner_levelsets
  double fitStart = 2.0;    // outer_decay: K is extracted here
  double lambda = 1.0;      // plap_appendix
  double twTol = 1e-3;      // shooting tolerance
};

// sigma values are factors of sigma* and feed the factor used by the preset.
struct SweepAxes {
  std::vector<double> m, p, sigma, omega;
  std::vector<int> N;
  bool empty() const { return m.empty() && p.empty() && N.empty() && sigma.empty() && omega.empty(); }
};

struct LabConfig {
  DiffusionParams params{0.5, 2.0, 1};
  double rate = 1.0;  // logistic f(u) = rate u (1 - u)
  double criticalRelTol = kCriticalRelTol;
  GridSpec grid{GridMode::Stretched, 0.0, 1e8, 1000, 4.0, 1};
  double tEnd = 10.0;
  std::size_t snapshots = 40;
  double epsReg = 1e-8;
  double cflSafety = 0.4;
  DatumSpec datum;
  EvaluateSpec evaluate;
  ExperimentSpec experiment;
  SweepAxes sweep;
  std::string outDir = "fkpp_out";
  std::uint64_t seed = 1;
  int workers = 1;
};

// Sectioned key = value text; '#' starts a comment. Missing keys keep the LabConfig defaults.
// Throws ConfigError with every issue found, each tagged with its line.
LabConfig parse_config(const std::string& text);
LabConfig load_config(const std::string& path);
// Emits every key; parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const LabConfig& config);
// Cross-field checks, e.g. a preset that needs a regime the parameters are not in.
void validate_config(const LabConfig& config);

ReactionSpec reaction_of(const LabConfig& config);
SolverConfig solver_of(const LabConfig& config);
std::vector<double> snapshot_times(const LabConfig& config);

}  // namespace fkpp
