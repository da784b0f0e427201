#include "fkpp/fronts.hpp"

#include <algorithm>
#include <array>
#include <boost/math/distributions/students_t.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "fkpp/errors.hpp"

namespace fkpp {

double crossing_radius(double r1, double u1, double r2, double u2, double omega) {
  if (u2 > 0.0 && u1 > 0.0 && u1 != u2) return r1 + (r2 - r1) * std::log(u1 / omega) / std::log(u1 / u2);
  if (u1 == u2) return r1;
  return r1 + (r2 - r1) * (u1 - omega) / (u1 - u2);
}

std::optional<double> level_radius(const std::vector<double>& centers, const std::vector<double>& u, double omega) {
  if (!(omega > 0.0 && omega < 1.0)) throw ParameterError("level omega must lie in (0,1)");
  if (u.size() != centers.size()) throw ParameterError("level_radius: size mismatch");
  if (u.empty() || u.back() >= omega) return std::nullopt;
  for (std::size_t i = u.size() - 1; i-- > 0;) {
    if (u[i] >= omega) return crossing_radius(centers[i], u[i], centers[i + 1], u[i + 1], omega);
  }
  return std::nullopt;
}

std::optional<double> level_radius(const RadialState& state, const RadialGrid& grid, double omega) {
  return level_radius(grid.centers, state.u, omega);
}

std::vector<LevelSetTrajectory> track_levels(const RunResult& result, const RadialGrid& grid,
                                             const std::vector<double>& omegas) {
  std::vector<LevelSetTrajectory> out;
  out.reserve(omegas.size());
  for (double w : omegas) {
    LevelSetTrajectory traj;
    traj.omega = w;
    for (const auto& s : result.snapshots) {
      if (!traj.samples.empty() && !(s.t > traj.samples.back().t)) continue;
      traj.samples.push_back({s.t, level_radius(s, grid, w)});
    }
    out.push_back(std::move(traj));
  }
  return out;
}

FitWindow default_window(const LevelSetTrajectory& traj) {
  if (traj.samples.empty()) return {};
  const double t0 = traj.samples.front().t, t1 = traj.samples.back().t;
  return {t0 + 0.5 * (t1 - t0), t1};
}

namespace {

RateFit least_squares(const LevelSetTrajectory& traj, std::optional<FitWindow> window, bool logR) {
  RateFit fit;
  fit.window = window ? *window : default_window(traj);
  std::vector<double> x, y;
  for (const auto& s : traj.samples) {
    if (s.t < fit.window.tLo || s.t > fit.window.tHi || !s.r) continue;
    if (logR && !(*s.r > 0.0)) continue;
    x.push_back(s.t);
    y.push_back(logR ? std::log(*s.r) : *s.r);
  }
  fit.samples = x.size();
  if (x.size() < 5) {
    std::ostringstream os;
    os << "fit needs at least 5 samples in [" << fit.window.tLo << ", " << fit.window.tHi << "], got " << x.size();
    throw ParameterError(os.str());
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ParameterError("fit window needs distinct times");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double res = y[i] - fit.intercept - fit.slope * x[i];
    ssr += res * res;
  }
  fit.rSquared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  const double dof = n - 2.0;
  const double tq = boost::math::quantile(boost::math::students_t(dof), 0.975);
  fit.slopeHalfWidth = tq * std::sqrt(ssr / dof / sxx);
  return fit;
}

}  // namespace

RateFit fit_exp_rate(const LevelSetTrajectory& traj, std::optional<FitWindow> window) {
  return least_squares(traj, window, true);
}

RateFit fit_linear_speed(const LevelSetTrajectory& traj, std::optional<FitWindow> window) {
  return least_squares(traj, window, false);
}

BandReport band_check(const LevelSetTrajectory& traj, double sigmaStar, std::optional<FitWindow> window) {
  BandReport rep;
  rep.window = window ? *window : default_window(traj);
  const double mid = 0.5 * (rep.window.tLo + rep.window.tHi);
  double first = 0.0, second = 0.0;
  bool haveFirst = false, haveSecond = false;
  for (const auto& s : traj.samples) {
    if (s.t < rep.window.tLo || s.t > rep.window.tHi || !s.r || !(*s.r > 0.0)) continue;
    const double b = *s.r * std::exp(-sigmaStar * s.t);
    const double C = std::max(b, 1.0 / b);
    if (s.t <= mid) {
      first = std::max(first, C);
      haveFirst = true;
    } else {
      second = std::max(second, C);
      haveSecond = true;
    }
  }
  rep.firstHalf = first;
  rep.secondHalf = second;
  rep.Cband = std::max(first, second);
  rep.ok = haveFirst && haveSecond && second <= first * (1.0 + 1e-12);
  return rep;
}

const char* to_string(SpeedClass c) { return c == SpeedClass::Sub ? "sub" : "super"; }

namespace {

using ShotState = std::array<double, 3>;  // (phi, v, xi) with v = |(phi^m)'|^{p-2} (phi^m)'

// Travelling-wave system in a rescaled variable s with d xi = ds / (1 + Lambda) below phi = 1/2, where
// Lambda = |v|^{(2-p)/(p-1)} phi^{1-m} / m is the stiff rate that blows up near phi = 0.
struct TravellingWave {
  double m, p, c;
  const ReactionSpec& f;
  bool rescale;

  void operator()(const ShotState& y, ShotState& dy, double) const {
    const double ph = std::max(y[0], 0.0);
    const double v = y[1];
    const double av = std::abs(v);
    const double g = std::pow(av, 1.0 / (p - 1.0));
    const double mob = ph > 0.0 ? std::pow(ph, 1.0 - m) : (m > 1.0 ? 1e300 : (m == 1.0 ? 1.0 : 0.0));
    double scale = 1.0;
    // the saddle at phi = 1 is slow in s, so rescale only on the lower half
    if (rescale && ph < 0.5) {
      const double lam = av > 0.0 ? std::pow(av, (2.0 - p) / (p - 1.0)) * mob / m : 0.0;
      scale = 1.0 / (1.0 + (std::isfinite(lam) ? lam : 1e300));
    }
    const double dphi = (v < 0.0 ? -g : g) * mob / m;
    dy[0] = scale * dphi;
    dy[1] = scale * (-c * dphi - f(std::min(ph, 1.0)));
    dy[2] = scale;
  }
};

// |v| ~ A psi^s along the unstable direction at phi = 1, psi = 1 - phi.
double launch_v(double m, double p, double c, double fPrime1, double psi) {
  const double F1 = std::abs(fPrime1);
  if (std::abs(p - 2.0) < 1e-12) {
    const double mu = (-c + std::sqrt(c * c + 4.0 * m * F1)) / (2.0 * m);
    return -m * mu * psi;
  }
  if (p < 2.0) {
    const double s = 2.0 * (p - 1.0) / p;
    const double A = std::pow(m * F1 / s, (p - 1.0) / p);
    return -A * std::pow(psi, s);
  }
  const double A = std::pow(m * F1 / std::max(c, 1e-300), p - 1.0);
  return -A * std::pow(psi, p - 1.0);
}

}  // namespace

ShotResult classify_speed(double m, double p, const ReactionSpec& f, double c, const ShootingOptions& opt) {
  namespace ode = boost::numeric::odeint;
  if (!(m > 0.0) || !(p > 1.0)) throw ParameterError("shooting needs m > 0 and p > 1");
  if (!(c >= 0.0)) throw ParameterError("shooting speed must be non-negative");
  // gamma = m(p-1) - 1 > 0 is the degenerate case with finite fronts
  const bool degenerate = m * (p - 1.0) - 1.0 > 1e-12;
  TravellingWave sys{m, p, c, f, true};
  const double psi0 = opt.launchOffset;
  const double phi0 = 1.0 - psi0;
  const double v0 = launch_v(m, p, c, f.fPrime1, psi0);
  ShotState y{phi0, v0, 0.0};
  auto stepper = ode::make_controlled(1e-300, opt.relTol, ode::runge_kutta_dopri5<ShotState>());
  ShotResult out;
  double s = 0.0, ds = 1e-3, vScale = std::abs(v0);
  out.profile.emplace_back(0.0, phi0);
  std::size_t steps = 0, rejected = 0;
  auto finish = [&](SpeedClass cls) {
    out.cls = cls;
    out.profile.emplace_back(y[2], y[0]);
    return out;
  };
  while (steps < opt.stepBudget) {
    if (stepper.try_step(sys, y, s, ds) != ode::success) {
      if (++rejected > 10000 || !(ds > 0.0)) break;
      continue;
    }
    rejected = 0;
    ++steps;
    ds = std::min(ds, 10.0);
    vScale = std::max(vScale, std::abs(y[1]));
    if (steps % 16 == 0) out.profile.emplace_back(y[2], y[0]);
    if (y[0] < 0.0 || y[1] > opt.eventTol * vScale) return finish(SpeedClass::Sub);
    if (!degenerate) {
      if (y[0] < opt.phiFloor) return finish(SpeedClass::Super);
      continue;
    }
    // R -> 1 on the finite-front branch, R -> 0 on the reaction-convection branch
    const double R = c > 0.0 ? -y[1] / (c * y[0]) : std::numeric_limits<double>::infinity();
    if (y[0] < 1e-6 && R < 0.05) return finish(SpeedClass::Super);
    if (y[0] < opt.phiFloor) return finish(R > 0.5 ? SpeedClass::Sub : SpeedClass::Super);
  }
  std::ostringstream os;
  os << "travelling-wave shot at c = " << c << " is inconclusive after " << steps << " steps";
  throw InconclusiveError(os.str(), c, out.profile);
}

TWEstimate critical_speed_shooting(double m, double p, const ReactionSpec& f, double tol, const ShootingOptions& opt) {
  if (m * (p - 1.0) - 1.0 < 0.0) throw RegimeError("critical_speed_shooting needs m(p-1) - 1 >= 0");
  if (!(tol > 0.0)) throw ParameterError("shooting tolerance must be positive");
  validate(f);
  TWEstimate est;
  auto shoot = [&](double c) {
    auto shot = classify_speed(m, p, f, c, opt);
    est.trace.push_back({c, shot.cls});
    return shot;
  };
  double lo = 0.0, hi = 1.0;
  auto top = shoot(hi);
  if (top.cls == SpeedClass::Sub) {
    while (top.cls == SpeedClass::Sub) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e9) throw InconclusiveError("no super-critical speed below 1e9", hi, top.profile);
      top = shoot(hi);
    }
  } else {
    double probe = 0.5;
    while (true) {
      auto low = shoot(probe);
      if (low.cls == SpeedClass::Sub) {
        lo = probe;
        break;
      }
      hi = probe;
      top = std::move(low);
      probe *= 0.5;
      if (probe < 1e-9) throw InconclusiveError("no sub-critical speed above 1e-9", probe, top.profile);
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    auto shot = shoot(mid);
    if (shot.cls == SpeedClass::Sub) {
      lo = mid;
    } else {
      hi = mid;
      top = std::move(shot);
    }
  }
  est.cLo = lo;
  est.cHi = hi;
  est.cStar = 0.5 * (lo + hi);
  est.profileSamples = std::move(top.profile);
  return est;
}

}  // namespace fkpp
