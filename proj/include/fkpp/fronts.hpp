#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "fkpp/model_params.hpp"
#include "fkpp/pde_solver.hpp"

namespace fkpp {

// Log-linear interpolation of the omega crossing between (r1,u1) and (r2,u2) with u1 >= omega > u2;
// falls back to linear interpolation when u2 <= 0.
double crossing_radius(double r1, double u1, double r2, double u2, double omega);

// Outermost radius where u crosses omega; nullopt when max u < omega or when the outermost cell
// is still at or above omega (the crossing lies outside the domain).
std::optional<double> level_radius(const std::vector<double>& centers, const std::vector<double>& u, double omega);
std::optional<double> level_radius(const RadialState& state, const RadialGrid& grid, double omega);

struct LevelSample {
  double t = 0.0;
  std::optional<double> r;  // nullopt marks a gap
};

struct LevelSetTrajectory {
  double omega = 0.5;
  std::vector<LevelSample> samples;
};

std::vector<LevelSetTrajectory> track_levels(const RunResult& result, const RadialGrid& grid,
                                             const std::vector<double>& omegas);

struct FitWindow {
  double tLo = 0.0;
  double tHi = 0.0;
};

// Last half of the time span covered by the trajectory.
FitWindow default_window(const LevelSetTrajectory& traj);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  FitWindow window;
  double rSquared = 1.0;
  double slopeHalfWidth = 0.0;  // 95% confidence half-width from the residual variance
  std::size_t samples = 0;
};

// Least squares of ln r against t; needs at least 5 positive samples in the window.
RateFit fit_exp_rate(const LevelSetTrajectory& traj, std::optional<FitWindow> window = std::nullopt);
// Least squares of r against t.
RateFit fit_linear_speed(const LevelSetTrajectory& traj, std::optional<FitWindow> window = std::nullopt);

struct BandReport {
  double Cband = 1.0;
  double firstHalf = 1.0;   // band constant over the first half of the window
  double secondHalf = 1.0;  // band constant over the second half
  FitWindow window;
  bool ok = false;
};

// Cband = max over the window of max(r e^{-sigma t}, (r e^{-sigma t})^{-1});
// ok when the second-half maximum does not exceed the first-half maximum.
BandReport band_check(const LevelSetTrajectory& traj, double sigmaStar, std::optional<FitWindow> window = std::nullopt);

enum class SpeedClass { Sub, Super };

const char* to_string(SpeedClass c);

struct ShootingOptions {
  double launchOffset = 1e-6;  // 1 - phi at launch
  double relTol = 1e-11;
  double eventTol = 1e-10;
  double phiFloor = 1e-100;  // deeper floors push |v|^{1/(p-1)} into subnormals
  std::size_t stepBudget = 10000000;
};

struct ShotResult {
  SpeedClass cls = SpeedClass::Sub;
  std::vector<std::pair<double, double>> profile;  // (xi, phi)
};

// Integrates the travelling-wave system for u(x,t) = phi(x - ct) from the unstable direction at phi = 1.
ShotResult classify_speed(double m, double p, const ReactionSpec& f, double c, const ShootingOptions& opt = {});

struct ShotRecord {
  double c = 0.0;
  SpeedClass cls = SpeedClass::Sub;
};

struct TWEstimate {
  double cStar = 0.0;
  double cLo = 0.0;
  double cHi = 0.0;
  std::vector<std::pair<double, double>> profileSamples;  // profile at cHi
  std::vector<ShotRecord> trace;
};

// Bisection on c between a SUB and a SUPER speed; needs m(p-1) - 1 >= 0.
TWEstimate critical_speed_shooting(double m, double p, const ReactionSpec& f, double tol,
                                   const ShootingOptions& opt = {});

}  // namespace fkpp
