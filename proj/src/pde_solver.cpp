#include "fkpp/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fkpp/errors.hpp"

namespace fkpp {

namespace {

constexpr double kGLNodes[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
constexpr double kGLWeights[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

double cell_volume(double a, double b, int N) { return sphere_area(N) * (std::pow(b, N) - std::pow(a, N)) / N; }

std::vector<double> stretched_edges(double rMax, int cells, double rCore) {
  auto generate = [&](double h, std::vector<double>* out) {
    double r = 0.0;
    if (out) out->assign(1, 0.0);
    for (int i = 0; i < cells; ++i) {
      r += h * std::max(r, rCore);
      if (out) out->push_back(r);
    }
    return r;
  };
  double lo = 0.0, hi = 1.0;
  while (generate(hi, nullptr) < rMax) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (generate(mid, nullptr) < rMax) lo = mid;
    else hi = mid;
  }
  std::vector<double> edges;
  generate(hi, &edges);
  edges.back() = rMax;
  return edges;
}

class Workspace {
 public:
  Workspace(const RadialGrid& grid, const SolverConfig& config) : g_(grid), c_(config) {
    const std::size_t n = grid.cells();
    w_.resize(n);
    flux_.resize(n + 1);
    dFace_.resize(n + 1);
    invDist_.resize(n + 1, 0.0);
    for (std::size_t i = 1; i < n; ++i) invDist_[i] = 1.0 / (grid.centers[i] - grid.centers[i - 1]);
    ghostR_ = 2.0 * grid.rMax() - grid.centers[n - 1];
    invDist_[n] = 1.0 / (ghostR_ - grid.centers[n - 1]);
    m_ = config.operatorMode == OperatorMode::PLaplacian ? 1.0 : config.m;
    p_ = config.p;
    eps2_ = config.epsReg * config.epsReg;
  }

  double power(double u) const {
    const double v = std::max(u, 0.0);
    return m_ == 1.0 ? v : std::pow(v, m_);
  }

  // Phi(s) and Phi'(s)
  void phi(double s, double& f, double& df) const {
    if (p_ == 2.0) {
      f = s;
      df = 1.0;
      return;
    }
    const double base = s * s + eps2_;
    const double t = std::pow(base, 0.5 * (p_ - 4.0));
    f = t * base * s;
    df = t * ((p_ - 1.0) * s * s + eps2_);
  }

  // slope of u -> u^m between two cell values, with both values floored at epsReg
  double chord(double uL, double uR, double wL, double wR) const {
    if (m_ == 1.0) return 1.0;
    const double eps = c_.epsReg;
    if (uL < eps || uR < eps) {
      uL = std::max(uL, eps);
      uR = std::max(uR, eps);
      wL = std::pow(uL, m_);
      wR = std::pow(uR, m_);
    }
    const double du = uR - uL;
    if (std::abs(du) > 1e-9 * std::max(uL, uR)) return (wR - wL) / du;
    return m_ * std::pow(0.5 * (uL + uR), m_ - 1.0);
  }

  // Fills flux_ for state u at time t; returns the largest per-cell rate.
  double fluxes(const std::vector<double>& u, double t, double ghostU) {
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) w_[i] = power(u[i]);
    flux_[0] = 0.0;
    dFace_[0] = 0.0;
    double f, df;
    for (std::size_t i = 1; i < n; ++i) {
      const double s = (w_[i] - w_[i - 1]) * invDist_[i];
      phi(s, f, df);
      flux_[i] = g_.faceAreas[i] * f;
      dFace_[i] = g_.faceAreas[i] * df * chord(u[i - 1], u[i], w_[i - 1], w_[i]) * invDist_[i];
    }
    if (c_.outerBC == OuterBC::DirichletFromField) {
      const double wg = power(ghostU);
      const double s = (wg - w_[n - 1]) * invDist_[n];
      phi(s, f, df);
      flux_[n] = g_.faceAreas[n] * f;
      dFace_[n] = g_.faceAreas[n] * df * chord(u[n - 1], ghostU, w_[n - 1], wg) * invDist_[n];
    } else {
      flux_[n] = 0.0;
      dFace_[n] = 0.0;
    }
    (void)t;
    double maxRate = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double rate = (dFace_[i] + dFace_[i + 1]) / g_.volumes[i];
      maxRate = std::max(maxRate, rate);
    }
    return maxRate;
  }

  double ghost(double t, double ghostOverride) const {
    if (c_.outerBC != OuterBC::DirichletFromField) return 0.0;
    if (!std::isnan(ghostOverride)) return ghostOverride;
    return c_.boundaryField(ghostR_, t);
  }

  // Applies the fluxes currently stored; returns mass entering through rMax.
  double apply(std::vector<double>& u, double h) const {
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) u[i] += h * (flux_[i + 1] - flux_[i]) / g_.volumes[i];
    return h * flux_[n];
  }

  double ghostR() const { return ghostR_; }

 private:
  const RadialGrid& g_;
  const SolverConfig& c_;
  std::vector<double> w_, flux_, dFace_, invDist_;
  double ghostR_ = 0.0;
  double m_ = 1.0, p_ = 2.0, eps2_ = 0.0;
};

double logistic_flow(double u, double rate, double h) {
  const double e = std::exp(rate * h);
  return u * e / (1.0 - u + u * e);
}

double rk4(const ReactionSpec& f, double u, double h) {
  const double k1 = f(u);
  const double k2 = f(u + 0.5 * h * k1);
  const double k3 = f(u + 0.5 * h * k2);
  const double k4 = f(u + h * k3);
  return u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::size_t react(std::vector<double>& u, const SolverConfig& c, double h) {
  std::size_t clips = 0;
  switch (c.reactionMode) {
    case ReactionMode::None: return 0;
    case ReactionMode::Linearized: {
      const double g = std::exp(c.fPrime0 * h);
      for (double& v : u) v *= g;
      return 0;
    }
    case ReactionMode::Full: {
      const bool exact = c.reaction.kind == ReactionKind::Logistic;
      for (double& v : u) {
        v = exact ? logistic_flow(v, c.reaction.rate, h) : rk4(c.reaction, v, h);
      }
      break;
    }
  }
  for (double& v : u) {
    if (v < -c.tolClip) {
      v = 0.0;
      ++clips;
    } else if (v > 1.0 + c.tolClip) {
      v = 1.0;
      ++clips;
    }
  }
  return clips;
}

// Step with an optional fixed ghost value (NaN means evaluate the boundary field).
RadialState do_step(Workspace& ws, const RadialState& state, const SolverConfig& config,
                    double dtCap, StepInfo* info, double ghostOverride) {
  RadialState next = state;
  const double rate = ws.fluxes(next.u, state.t, ws.ghost(state.t, ghostOverride));
  double dt = rate > 0.0 ? config.cflSafety / rate : std::numeric_limits<double>::infinity();
  dt = std::min(dt, dtCap);
  if (!std::isfinite(dt)) dt = dtCap;
  if (!(dt >= 1e-14) && dtCap >= 1e-14) {
    std::ostringstream os;
    os << "time step underflow: dt = " << dt << " at t = " << state.t;
    throw StiffnessError(os.str(), state.t, dt);
  }
  double inflow = ws.apply(next.u, 0.5 * dt);
  const std::size_t clips = react(next.u, config, dt);
  ws.fluxes(next.u, state.t + 0.5 * dt, ws.ghost(state.t + 0.5 * dt, ghostOverride));
  inflow += ws.apply(next.u, 0.5 * dt);
  for (double v : next.u) {
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "non-finite value after step at t = " << state.t;
      throw NumericError(os.str());
    }
  }
  next.t = state.t + dt;
  if (info) {
    info->dt = dt;
    info->boundaryFlux = inflow;
    info->clipEvents = clips;
  }
  return next;
}

double max_backward_difference(const std::vector<double>& u) {
  double worst = 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) worst = std::max(worst, u[i - 1] - u[i]);
  return worst;
}

struct Runner {
  const RadialGrid& grid;
  const SolverConfig& config;
  Workspace ws;
  RunResult result;
  std::size_t sinceHistory = 0;

  Runner(const RadialGrid& g, const SolverConfig& c) : grid(g), config(c), ws(g, c) {}

  void record(const RadialState& s, double dt) {
    auto& d = result.diagnostics;
    d.historyTimes.push_back(s.t);
    d.massHistory.push_back(mass(s, grid));
    d.dtHistory.push_back(dt);
    d.boundaryMaxHistory.push_back(s.u.back());
  }

  // ghostFor(t) returns NaN to use the boundary field.
  template <class GhostFn, class SnapshotHook>
  void go(RadialState state, GhostFn ghostFor, SnapshotHook onSnapshot) {
    auto& d = result.diagnostics;
    std::vector<double> targets = config.snapshotTimes;
    std::size_t next = 0;
    record(state, 0.0);
    auto take = [&](const RadialState& s) {
      result.snapshots.push_back(s);
      onSnapshot(s);
    };
    while (next < targets.size() && targets[next] <= state.t) {
      take(state);
      ++next;
    }
    const double tEnd = config.tEnd;
    double lastDt = 0.0;
    while (state.t < tEnd) {
      const double target = next < targets.size() ? std::min(targets[next], tEnd) : tEnd;
      const double cap = target - state.t;
      StepInfo info;
      state = do_step(ws, state, config, cap, &info, ghostFor(state.t));
      if (cap - info.dt <= 1e-12 * std::max(1.0, std::abs(target))) state.t = target;
      lastDt = info.dt;
      ++d.steps;
      d.minDt = std::min(d.minDt, info.dt);
      d.clipEvents += info.clipEvents;
      d.boundaryFluxIntegral += info.boundaryFlux;
      if (config.outerBC == OuterBC::HomogeneousNeumann && state.u.back() > config.boundaryAlarm) {
        d.boundaryAlarm = true;
      }
      if (++sinceHistory >= config.historyStride) {
        record(state, info.dt);
        sinceHistory = 0;
      }
      while (next < targets.size() && targets[next] <= state.t) {
        take(state);
        ++next;
      }
      if (d.steps >= config.maxSteps) {
        std::ostringstream os;
        os << "step budget of " << config.maxSteps << " exhausted at t = " << state.t;
        throw StiffnessError(os.str(), state.t, info.dt);
      }
    }
    if (sinceHistory != 0) record(state, lastDt);
  }
};

}  // namespace

const char* to_string(GridMode mode) {
  switch (mode) {
    case GridMode::Uniform: return "uniform";
    case GridMode::LogUniform: return "log";
    case GridMode::Stretched: return "stretched";
  }
  return "unknown";
}

const char* to_string(ReactionMode mode) {
  switch (mode) {
    case ReactionMode::Full: return "full";
    case ReactionMode::Linearized: return "linearized";
    case ReactionMode::None: return "none";
  }
  return "unknown";
}

const char* to_string(OperatorMode mode) {
  return mode == OperatorMode::DoublyNonlinear ? "doubly_nonlinear" : "p_laplacian";
}

const char* to_string(OuterBC bc) { return bc == OuterBC::HomogeneousNeumann ? "neumann" : "dirichlet_field"; }

RadialGrid build_grid(const GridSpec& spec) {
  if (spec.N < 1) throw ParameterError("grid dimension N must be >= 1");
  if (spec.cells < kMinCells) throw ParameterError("grid needs at least 64 cells");
  if (!(spec.rMax > 0.0) || !std::isfinite(spec.rMax)) throw ParameterError("grid rMax must be positive");
  RadialGrid g;
  g.mode = spec.mode;
  g.N = spec.N;
  const int n = spec.cells;
  switch (spec.mode) {
    case GridMode::Uniform:
      g.edges.resize(n + 1);
      for (int i = 0; i <= n; ++i) g.edges[i] = spec.rMax * i / n;
      break;
    case GridMode::LogUniform: {
      if (!(spec.rInner > 0.0) || !(spec.rMax > spec.rInner)) {
        throw ParameterError("log grid needs 0 < rInner < rMax");
      }
      const double a = std::log(spec.rInner), b = std::log(spec.rMax);
      g.edges.resize(n + 1);
      for (int i = 0; i <= n; ++i) g.edges[i] = std::exp(a + (b - a) * i / n);
      g.edges.front() = spec.rInner;
      g.edges.back() = spec.rMax;
      break;
    }
    case GridMode::Stretched:
      if (!(spec.rCore > 0.0) || !(spec.rCore < spec.rMax)) throw ParameterError("stretched grid needs 0 < rCore < rMax");
      g.edges = stretched_edges(spec.rMax, n, spec.rCore);
      break;
  }
  for (int i = 0; i < n; ++i) {
    if (!(g.edges[i + 1] > g.edges[i])) throw ParameterError("grid edges must be strictly increasing");
  }
  const double w = sphere_area(spec.N);
  g.centers.resize(n);
  g.volumes.resize(n);
  g.faceAreas.resize(n + 1);
  for (int i = 0; i < n; ++i) {
    g.centers[i] = 0.5 * (g.edges[i] + g.edges[i + 1]);
    g.volumes[i] = cell_volume(g.edges[i], g.edges[i + 1], spec.N);
  }
  for (int i = 0; i <= n; ++i) g.faceAreas[i] = w * std::pow(g.edges[i], spec.N - 1);
  return g;
}

void validate(const SolverConfig& c) {
  if (!(c.epsReg > 0.0)) throw ParameterError("epsReg must be positive");
  if (!(c.cflSafety > 0.0 && c.cflSafety <= 1.0)) throw ParameterError("cflSafety must lie in (0,1]");
  if (!(c.tEnd >= 0.0)) throw ParameterError("tEnd must be non-negative");
  if (!(c.p > 1.0)) throw ParameterError("p must be > 1");
  if (c.operatorMode == OperatorMode::DoublyNonlinear && !(c.m > 0.0)) throw ParameterError("m must be positive");
  if (!std::is_sorted(c.snapshotTimes.begin(), c.snapshotTimes.end())) {
    throw ParameterError("snapshot times must be sorted");
  }
  for (double t : c.snapshotTimes) {
    if (t < 0.0 || t > c.tEnd) throw ParameterError("snapshot times must lie in [0, tEnd]");
  }
  if (c.reactionMode == ReactionMode::Full && !c.reaction.f) throw ParameterError("full reaction mode needs f");
  if (c.outerBC == OuterBC::DirichletFromField && !c.boundaryField.eval) {
    throw ParameterError("Dirichlet boundary needs an analytic field");
  }
  if (c.historyStride == 0) throw ParameterError("historyStride must be positive");
}

SolverConfig make_solver_config(const DiffusionParams& params, double tEnd, std::vector<double> snapshotTimes) {
  validate(params);
  SolverConfig c;
  c.m = params.m;
  c.p = params.p;
  c.tEnd = tEnd;
  c.snapshotTimes = std::move(snapshotTimes);
  return c;
}

double dnl_flux(double uLeft, double uRight, double rFace, double dr, int N, const SolverConfig& config) {
  const double m = config.operatorMode == OperatorMode::PLaplacian ? 1.0 : config.m;
  const double wL = std::pow(std::max(uLeft, 0.0), m);
  const double wR = std::pow(std::max(uRight, 0.0), m);
  const double s = (wR - wL) / dr;
  double phi = s;
  if (config.p != 2.0) phi = std::pow(s * s + config.epsReg * config.epsReg, 0.5 * (config.p - 2.0)) * s;
  return std::pow(rFace, N - 1) * phi;
}

std::vector<double> cell_averages(const std::function<double(double)>& f, const RadialGrid& grid) {
  std::vector<double> out(grid.cells());
  for (std::size_t i = 0; i < grid.cells(); ++i) {
    const double a = grid.edges[i], b = grid.edges[i + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double num = 0.0, den = 0.0;
    double first = 0.0;
    bool constant = true;
    for (int k = 0; k < 8; ++k) {
      const double x = k < 4 ? -kGLNodes[3 - k] : kGLNodes[k - 4];
      const double wq = k < 4 ? kGLWeights[3 - k] : kGLWeights[k - 4];
      const double r = mid + half * x;
      const double v = f(r);
      if (k == 0) first = v;
      else if (v != first) constant = false;
      const double wr = wq * std::pow(r, grid.N - 1);
      num += wr * v;
      den += wr;
    }
    out[i] = constant ? first : num / den;
  }
  return out;
}

std::vector<double> cell_averages(const AnalyticField& field, double t, const RadialGrid& grid) {
  return cell_averages([&](double r) { return field(r, t); }, grid);
}

double stable_dt(const RadialState& state, const RadialGrid& grid, const SolverConfig& config) {
  Workspace ws(grid, config);
  const double rate = ws.fluxes(state.u, state.t, ws.ghost(state.t, std::nan("")));
  return rate > 0.0 ? config.cflSafety / rate : std::numeric_limits<double>::infinity();
}

RadialState step(const RadialState& state, const RadialGrid& grid, const SolverConfig& config, double dtCap,
                 StepInfo* info) {
  if (state.u.size() != grid.cells()) throw ParameterError("state size does not match grid");
  Workspace ws(grid, config);
  return do_step(ws, state, config, dtCap, info, std::nan(""));
}

RunResult run_from_state(const RadialState& initial, const RadialGrid& grid, const SolverConfig& config) {
  validate(config);
  if (initial.u.size() != grid.cells()) throw ParameterError("state size does not match grid");
  for (double v : initial.u) {
    if (!std::isfinite(v)) throw ParameterError("initial state must be finite");
  }
  Runner runner(grid, config);
  runner.go(
      initial, [](double) { return std::nan(""); }, [](const RadialState&) {});
  return std::move(runner.result);
}

RunResult run(const std::function<double(double)>& datum, const RadialGrid& grid, const SolverConfig& config) {
  validate(config);
  RadialState s;
  s.t = 0.0;
  s.u = cell_averages(datum, grid);
  return run_from_state(s, grid, config);
}

RunResult run_plap_increasing(double lambda, const RadialGrid& grid, const SolverConfig& config) {
  if (config.operatorMode != OperatorMode::PLaplacian) throw ParameterError("run_plap_increasing needs PLaplacian mode");
  self_similar_exponents(lambda, config.p);  // range check
  SolverConfig c = config;
  c.reactionMode = ReactionMode::None;
  c.outerBC = OuterBC::DirichletFromField;
  double H = 1.0;
  const double ghostR = 2.0 * grid.rMax() - grid.centers.back();
  const double cLast = grid.centers.back();
  c.boundaryField = {"far_field", [lambda, &H](double r, double) { return H * std::pow(r, lambda); }};
  validate(c);
  RadialState s;
  s.u = cell_averages([lambda](double r) { return std::pow(r, lambda); }, grid);
  Runner runner(grid, c);
  runner.go(
      s, [&](double) { return H * std::pow(ghostR, lambda); },
      [&](const RadialState& snap) { H = snap.u.back() / std::pow(cLast, lambda); });
  auto& d = runner.result.diagnostics;
  for (const auto& snap : runner.result.snapshots) {
    d.monotonicityViolation = std::max(d.monotonicityViolation, max_backward_difference(snap.u));
  }
  d.monotonicityFlag = d.monotonicityViolation > 1e-8;
  return std::move(runner.result);
}

std::vector<ProfileSample> self_similar_profile(const RadialState& state, const RadialGrid& grid, double lambda,
                                                double p) {
  if (!(state.t > 0.0)) throw DomainError("self-similar profile needs t > 0");
  const auto ex = self_similar_exponents(lambda, p);
  std::vector<ProfileSample> out(grid.cells());
  const double tb = std::pow(state.t, -ex.betaLambda);
  const double ta = std::pow(state.t, ex.alphaLambda);
  for (std::size_t i = 0; i < grid.cells(); ++i) out[i] = {grid.centers[i] * tb, state.u[i] * ta};
  return out;
}

double mass(const std::vector<double>& u, const RadialGrid& grid) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * grid.volumes[i];
  return s;
}

double mass(const RadialState& state, const RadialGrid& grid) { return mass(state.u, grid); }

}  // namespace fkpp
