#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "fkpp/analytic_solutions.hpp"
#include "fkpp/model_params.hpp"

namespace fkpp {

// Stretched: uniform spacing h*rCore up to rCore, geometric growth factor (1+h) beyond.
enum class GridMode { Uniform, LogUniform, Stretched };

const char* to_string(GridMode mode);

struct GridSpec {
  GridMode mode = GridMode::Uniform;
  double rInner = 0.0;  // LogUniform only
  double rMax = 1.0;
  int cells = 64;
  double rCore = 1.0;  // Stretched only
  int N = 1;
};

struct RadialGrid {
  GridMode mode = GridMode::Uniform;
  int N = 1;
  std::vector<double> edges;
  std::vector<double> centers;
  std::vector<double> volumes;    // includes the sphere area; full-line convention for N = 1
  std::vector<double> faceAreas;  // sphere area times r^{N-1} at each edge

  std::size_t cells() const { return centers.size(); }
  double rMax() const { return edges.back(); }
};

inline constexpr int kMinCells = 64;

RadialGrid build_grid(const GridSpec& spec);

enum class ReactionMode { Full, Linearized, None };
enum class OperatorMode { DoublyNonlinear, PLaplacian };
enum class OuterBC { HomogeneousNeumann, DirichletFromField };

const char* to_string(ReactionMode mode);
const char* to_string(OperatorMode mode);
const char* to_string(OuterBC bc);

struct SolverConfig {
  double epsReg = 1e-8;
  double cflSafety = 0.4;
  double tEnd = 1.0;
  std::vector<double> snapshotTimes;

  ReactionMode reactionMode = ReactionMode::None;
  ReactionSpec reaction = logistic(1.0);  // Full mode
  double fPrime0 = 1.0;                   // Linearized mode

  OperatorMode operatorMode = OperatorMode::DoublyNonlinear;
  double m = 1.0;  // ignored in PLaplacian mode
  double p = 2.0;

  OuterBC outerBC = OuterBC::HomogeneousNeumann;
  AnalyticField boundaryField;
  double boundaryAlarm = 1e-6;

  double tolClip = 1e-10;
  std::size_t maxSteps = 200000000;
  // Diagnostics are recorded every historyStride steps and at snapshots.
  std::size_t historyStride = 200;
};

// Throws ParameterError on inconsistent settings.
void validate(const SolverConfig& config);

// Convenience: DoublyNonlinear operator with the given params.
SolverConfig make_solver_config(const DiffusionParams& params, double tEnd, std::vector<double> snapshotTimes);

struct RadialState {
  double t = 0.0;
  std::vector<double> u;
};

struct RunDiagnostics {
  std::vector<double> historyTimes;
  std::vector<double> massHistory;
  std::vector<double> dtHistory;
  std::vector<double> boundaryMaxHistory;
  std::size_t clipEvents = 0;
  std::size_t steps = 0;
  bool boundaryAlarm = false;
  double boundaryFluxIntegral = 0.0;  // total mass entering through rMax
  double minDt = std::numeric_limits<double>::infinity();
  double monotonicityViolation = 0.0;
  bool monotonicityFlag = false;
};

struct RunResult {
  std::vector<RadialState> snapshots;
  RunDiagnostics diagnostics;
};

// r^{N-1} Phi(s) with s = (uRight^m - uLeft^m)/dr and Phi(s) = (s^2 + eps^2)^{(p-2)/2} s.
double dnl_flux(double uLeft, double uRight, double rFace, double dr, int N, const SolverConfig& config);

// Cell averages of a radial function (Gauss-Legendre per cell, weight r^{N-1}).
std::vector<double> cell_averages(const std::function<double(double)>& f, const RadialGrid& grid);
std::vector<double> cell_averages(const AnalyticField& field, double t, const RadialGrid& grid);

// Largest explicit step allowed by the effective-diffusivity bound.
double stable_dt(const RadialState& state, const RadialGrid& grid, const SolverConfig& config);

struct StepInfo {
  double dt = 0.0;
  double boundaryFlux = 0.0;  // mass entering through rMax during the step
  std::size_t clipEvents = 0;
};

// One Strang step (diffusion dt/2, reaction dt, diffusion dt/2) with dt = min(stable_dt, dtCap).
RadialState step(const RadialState& state, const RadialGrid& grid, const SolverConfig& config,
                 double dtCap = std::numeric_limits<double>::infinity(), StepInfo* info = nullptr);

RunResult run(const std::function<double(double)>& datum, const RadialGrid& grid, const SolverConfig& config);
RunResult run_from_state(const RadialState& initial, const RadialGrid& grid, const SolverConfig& config);

// Pure p-Laplacian evolution from |x|^lambda with a far-field Dirichlet condition H |x|^lambda,
// H refit at every snapshot.
RunResult run_plap_increasing(double lambda, const RadialGrid& grid, const SolverConfig& config);

struct ProfileSample {
  double xi = 0.0;
  double F = 0.0;
};

// F(xi) samples of a self-similar run: xi = r t^{-beta}, F = u t^{alpha}.
std::vector<ProfileSample> self_similar_profile(const RadialState& state, const RadialGrid& grid, double lambda,
                                                double p);

double mass(const RadialState& state, const RadialGrid& grid);
double mass(const std::vector<double>& u, const RadialGrid& grid);

}  // namespace fkpp
