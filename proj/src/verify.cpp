#include "fkpp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fkpp/errors.hpp"

namespace fkpp {

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = b;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = b;
  return out;
}

// Index of the snapshot taken at time t.
std::size_t snapshot_index(const RunResult& run, double t) {
  for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
    if (std::abs(run.snapshots[k].t - t) <= 1e-12 * std::max(1.0, std::abs(t))) return k;
  }
  std::ostringstream os;
  os << "no snapshot at t = " << t;
  throw ParameterError(os.str());
}

double lower_bound_f_over_one_minus_u(const ReactionSpec& f, double eps) {
  if (f.kind == ReactionKind::Logistic) return f.rate * eps;
  double best = -f.fPrime1;
  const int n = 4096;
  for (int i = 0; i < n; ++i) {
    const double u = eps + (1.0 - eps) * i / n;
    best = std::min(best, f(u) / (1.0 - u));
  }
  return best;
}

SolverConfig audit_config(const DiffusionParams& params, const AuditRunOptions& opt, std::vector<double> snaps) {
  SolverConfig c = make_solver_config(params, opt.tEnd, std::move(snaps));
  c.epsReg = opt.epsReg;
  c.cflSafety = opt.cflSafety;
  return c;
}

}  // namespace

WProblemSetup w_coefficients(const DiffusionParams& params, double epsTilde, const ReactionSpec& f,
                             std::optional<double> sigma, std::optional<double> nu) {
  if (!(epsTilde > 0.0 && epsTilde < 1.0)) throw ParameterError("epsTilde must lie in (0,1)");
  if (!(f.fPrime1 < 0.0)) throw ParameterError("w coefficients need f'(1) < 0");
  const double ss = sigma_star(params, f);
  WProblemSetup s;
  s.epsTilde = epsTilde;
  s.sigma = sigma.value_or(0.5 * ss);
  if (!(s.sigma > 0.0 && s.sigma < ss)) throw ParameterError("sigma must lie in (0, sigma*)");
  s.nu = nu.value_or(0.5 * (s.sigma + ss));
  if (!(s.nu > s.sigma && s.nu < ss)) throw ParameterError("nu must lie in (sigma, sigma*)");
  const double m = params.m, p = params.p;
  s.lambda = p / (p - 1.0);
  const double scaled = std::pow(epsTilde, 1.0 - m) / m;
  if (m < 1.0) {
    s.a0 = scaled;
    s.a1Raw = 1.0 / m;
  } else {
    s.a0 = 1.0 / m;
    s.a1Raw = scaled;
  }
  const double base = lower_bound_f_over_one_minus_u(f, epsTilde);
  s.c0Raw = m < 1.0 ? base : base / m;
  if (!(s.c0Raw > 0.0)) throw ParameterError("reaction gives no positive lower bound c0");
  const double target = s.nu * s.lambda;
  // only shrinking c0 or enlarging a1 keeps the bounds valid, and both lower c0/a1
  if (s.c0Raw / s.a1Raw < target)
    throw ParameterError("c0/a1 = " + std::to_string(s.c0Raw / s.a1Raw) + " lies below nu*lambda = " +
                         std::to_string(target) + "; raise epsTilde or lower nu");
  s.a1 = s.a1Raw;
  s.c0 = target * s.a1;
  return s;
}

double w_tau(const WProblemSetup& s, double p, double sinceT1) {
  const double k = s.c0 / s.a1;
  if (p == 2.0) return sinceT1 / s.a1;
  return std::expm1(k * (2.0 - p) * sinceT1) / (s.c0 * (2.0 - p));
}

AnalyticField w_super_solution(const DiffusionParams& params, const WProblemSetup& s, double t1) {
  const double p = params.p, N = params.N;
  const double lam = s.lambda, k = s.c0 / s.a1, tau1 = 1.0 / s.c0;
  const double coeff = N * std::pow(lam, p - 1.0);
  WProblemSetup copy = s;
  return {"w_super", [=](double r, double t) {
            const double d = t - t1;
            if (d < 0.0) throw DomainError("w super-solution is defined for t >= t1");
            const double tau = w_tau(copy, p, d);
            return std::exp(-k * d) * (1.0 + std::pow(std::abs(r), lam) + coeff * (tau + tau1));
          }};
}

double w_q_min(const WProblemSetup& s, double p, double t1, const std::vector<double>& times) {
  const double k = s.c0 / s.a1, tau1 = 1.0 / s.c0;
  double q = std::numeric_limits<double>::infinity();
  for (double t : times) {
    if (t < t1) continue;
    const double d = t - t1;
    const double tauPrime = std::exp(k * (2.0 - p) * d) / s.a1;
    q = std::min(q, k * (w_tau(s, p, d) + tau1) - tauPrime);
  }
  return q;
}

bool Region::contains(double r, double t) const {
  if (kind == RegionKind::FullDomain) return true;
  return t >= t0 && r <= std::exp(sigma * t);
}

const char* to_string(RegionKind kind) { return kind == RegionKind::FullDomain ? "full_domain" : "inner_set"; }

const char* to_string(OrderingStatus status) {
  switch (status) {
    case OrderingStatus::Pass: return "pass";
    case OrderingStatus::ComparisonFailure: return "comparison_failure";
    case OrderingStatus::PreconditionFailure: return "precondition_failure";
  }
  return "unknown";
}

OrderingReport check_ordering(const OrderingSide& lower, const OrderingSide& upper, const RadialGrid& grid,
                              const Region& region, double tol, std::vector<double> times) {
  if (!(tol >= 0.0)) throw ParameterError("ordering tolerance must be non-negative");
  const RunResult* runs[2] = {nullptr, nullptr};
  if (auto* r = std::get_if<const RunResult*>(&lower)) runs[0] = *r;
  if (auto* r = std::get_if<const RunResult*>(&upper)) runs[1] = *r;
  if (times.empty()) {
    const RunResult* src = runs[0] ? runs[0] : runs[1];
    if (!src) throw ParameterError("ordering check between two fields needs explicit times");
    for (const auto& s : src->snapshots) times.push_back(s.t);
  }
  for (const RunResult* run : runs) {
    if (run && !run->snapshots.empty() && run->snapshots.front().u.size() != grid.cells()) {
      throw ParameterError("snapshot size does not match grid");
    }
  }

  auto value = [&](const OrderingSide& side, const RunResult* run, std::size_t snap, std::size_t i, double t) {
    if (run) return run->snapshots[snap].u[i];
    return std::get<AnalyticField>(side)(grid.centers[i], t);
  };

  OrderingReport rep;
  rep.region = region;
  rep.tol = tol;
  bool first = true;
  for (double t : times) {
    const std::size_t s0 = runs[0] ? snapshot_index(*runs[0], t) : 0;
    const std::size_t s1 = runs[1] ? snapshot_index(*runs[1], t) : 0;
    double outermost = 0.0;
    bool any = false;
    double atTime = 0.0;
    for (std::size_t i = 0; i < grid.cells(); ++i) {
      const double r = grid.centers[i];
      if (!region.contains(r, t)) continue;
      const double v = std::max(0.0, value(lower, runs[0], s0, i, t) - value(upper, runs[1], s1, i, t));
      ++rep.latticePoints;
      any = true;
      outermost = v;
      atTime = std::max(atTime, v);
      if (v > rep.worstViolation || (!rep.violationLocus && v > 0.0)) {
        rep.worstViolation = v;
        rep.violationLocus = Locus{r, t};
      }
    }
    if (!any) continue;
    if (first) rep.initialViolation = atTime;
    first = false;
    rep.boundaryViolation = std::max(rep.boundaryViolation, outermost);
  }
  if (rep.latticePoints == 0) throw ParameterError("ordering lattice is empty");
  rep.pass = rep.worstViolation <= tol;
  if (rep.initialViolation > tol || rep.boundaryViolation > tol) {
    rep.status = OrderingStatus::PreconditionFailure;
  } else {
    rep.status = rep.pass ? OrderingStatus::Pass : OrderingStatus::ComparisonFailure;
  }
  return rep;
}

RunResult map_snapshots(const RunResult& in, const RadialGrid& grid,
                        const std::function<double(double u, double r, double t)>& g) {
  RunResult out;
  out.diagnostics = in.diagnostics;
  out.snapshots = in.snapshots;
  for (auto& s : out.snapshots) {
    if (s.u.size() != grid.cells()) throw ParameterError("snapshot size does not match grid");
    for (std::size_t i = 0; i < s.u.size(); ++i) s.u[i] = g(s.u[i], grid.centers[i], s.t);
  }
  return out;
}

BernoulliAudit audit_bernoulli_super(const DiffusionParams& params, const ReactionSpec& f,
                                     const PlateauTailDatum& datum, const RadialGrid& grid,
                                     const AuditRunOptions& opt, double tol) {
  const double gh = params.gammaHat();
  if (std::abs(datum.tailExponent - params.p / gh) > 1e-12 * datum.tailExponent) {
    throw ParameterError("datum tail exponent must be p/gammaHat");
  }
  const double rate = f.fPrime0;
  // G(0) = 2 a0 leaves room for cell averaging of the convex tail
  const double a = kappa(params) / rate + std::pow(2.0 * datum.a0, gh);
  BernoulliAudit out{make_bernoulli_super(params, a, rate), {}};
  SolverConfig c = audit_config(params, opt, linspace(0.0, opt.tEnd, opt.snapshots + 1));
  c.reactionMode = ReactionMode::Full;
  c.reaction = f;
  const RunResult run = fkpp::run([&](double r) { return datum(r); }, grid, c);
  out.report = check_ordering(&run, out.super.field(), grid, Region::full(), tol);
  return out;
}

BarenblattBelowAudit audit_barenblatt_below_linearized(const DiffusionParams& params, double lambda,
                                                       const PlateauTailDatum& datum, const RadialGrid& grid,
                                                       const AuditRunOptions& opt, double tol) {
  if (!(lambda > 0.0)) throw ParameterError("linearized rate must be positive");
  const double gh = params.gammaHat(), p = params.p, N = params.N;
  const auto B1 = BarenblattFast::with_mass(params, 1.0);
  const auto pb = profile_bounds(B1);
  const double alpha = B1.alpha();
  const double Kbar = std::pow(std::pow(B1.C(), (p - 1.0) / gh) * std::pow(pb.K1, -alpha * gh), N / (alpha * p));
  BarenblattBelowAudit out;
  out.M1 = Kbar * std::pow(datum.rhoTilde0, N) * datum.epsTilde;
  out.theta1 = std::pow(pb.K1, -gh) * std::pow(datum.rhoTilde0, p) * std::pow(datum.epsTilde, gh);
  const auto B = BarenblattFast::with_mass(params, out.M1);

  SolverConfig c = audit_config(params, opt, linspace(0.0, opt.tEnd, opt.snapshots + 1));
  c.reactionMode = ReactionMode::Linearized;
  c.fPrime0 = lambda;
  const RunResult w = fkpp::run([&](double r) { return datum(r); }, grid, c);
  const RunResult wt = map_snapshots(w, grid, [lambda](double u, double, double t) { return std::exp(-lambda * t) * u; });

  const double theta1 = out.theta1, ts = B.time_scale();
  AnalyticField lowerField{"barenblatt_m1", [B, theta1, ts, lambda, gh](double r, double t) {
                             return B.absorbed(r, theta1 + ts * time_change(t, lambda, gh));
                           }};
  const double eps = datum.epsTilde;
  AnalyticField ceiling{"eps_tilde", [eps](double, double) { return eps; }};
  out.lowerReport = check_ordering(lowerField, &wt, grid, Region::full(), tol);
  out.upperReport = check_ordering(&wt, ceiling, grid, Region::full(), tol);
  out.pass = out.lowerReport.pass && out.upperReport.pass;
  return out;
}

WPairAudit audit_w_pair(const DiffusionParams& params, const ReactionSpec& f, const PlateauTailDatum& datum,
                        const RadialGrid& grid, double sigma, double t1, const AuditRunOptions& opt, double tol) {
  if (!(t1 >= 0.0 && t1 < opt.tEnd)) throw ParameterError("w pair audit needs 0 <= t1 < tEnd");
  const double ss = sigma_star(params, f);
  if (!(sigma > 0.0 && sigma < ss)) throw ParameterError("sigma must lie in (0, sigma*)");
  const double nu = 0.5 * (sigma + ss);
  SolverConfig c = audit_config(params, opt, linspace(t1, opt.tEnd, opt.snapshots + 1));
  c.reactionMode = ReactionMode::Full;
  c.reaction = f;
  const RunResult run = fkpp::run([&](double r) { return datum(r); }, grid, c);

  const Region region = Region::inner(nu, t1);
  double eps = 1.0;
  for (const auto& s : run.snapshots) {
    for (std::size_t i = 0; i < grid.cells(); ++i) {
      if (region.contains(grid.centers[i], s.t)) eps = std::min(eps, s.u[i]);
    }
  }
  if (!(eps > 0.0)) throw AuditError("solution vanishes on the inner set; no positive lower bound");
  eps = std::min(eps, 1.0 - 1e-12);

  WPairAudit out;
  out.t1 = t1;
  out.setup = w_coefficients(params, eps, f, sigma, nu);
  const double m = params.m;
  const RunResult wLow = map_snapshots(run, grid, [m](double u, double, double) { return 1.0 - std::pow(u, m); });
  std::vector<double> times;
  for (const auto& s : run.snapshots) times.push_back(s.t);
  out.qMin = w_q_min(out.setup, params.p, t1, times);
  out.report = check_ordering(&wLow, w_super_solution(params, out.setup, t1), grid, region, tol);
  return out;
}

TrackingHistory check_selfsimilar_tracking(const DiffusionParams& params, double M, double t0Init, double horizon,
                                           const RadialGrid& grid, std::size_t snapshots) {
  if (!(t0Init > 0.0)) throw ParameterError("t0Init must be positive");
  if (!(horizon >= 0.0)) throw ParameterError("horizon must be non-negative");
  const auto B = BarenblattFast::with_mass(params, M);
  const auto field = B.field();
  RadialState init{0.0, cell_averages(field, t0Init, grid)};
  SolverConfig c = make_solver_config(params, horizon, horizon > 0.0 ? linspace(0.0, horizon, snapshots + 1)
                                                                     : std::vector<double>{0.0});
  const RunResult run = run_from_state(init, grid, c);
  TrackingHistory h;
  h.boundaryAlarm = run.diagnostics.boundaryAlarm;
  for (const auto& s : run.snapshots) {
    const auto exact = cell_averages(field, t0Init + s.t, grid);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
      num += std::abs(s.u[i] - exact[i]) * grid.volumes[i];
      den += std::abs(exact[i]) * grid.volumes[i];
    }
    h.times.push_back(s.t);
    h.errors.push_back(num / den);
  }
  return h;
}

TimeChangeReport check_time_change_equivalence(const DiffusionParams& params, double fPrime0,
                                               const std::function<double(double)>& datum, double horizon,
                                               const RadialGrid& grid, std::size_t snapshots, double epsReg) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be finite and non-negative");
  if (!(fPrime0 >= 0.0)) throw ParameterError("fPrime0 must be non-negative");
  const double gh = params.gammaHat();
  if (!(gh > 0.0)) throw RegimeError("time change needs gammaHat > 0");
  const auto ts = linspace(0.0, horizon, snapshots + 1);
  std::vector<double> taus;
  for (double t : ts) taus.push_back(time_change(t, fPrime0, gh));
  if (!(taus.back() < tau_infinity(fPrime0, gh))) throw DomainError("tau(horizon) must stay below tau_infinity");

  SolverConfig cu = make_solver_config(params, horizon, ts);
  cu.epsReg = epsReg;
  cu.reactionMode = ReactionMode::Linearized;
  cu.fPrime0 = fPrime0;
  SolverConfig cv = make_solver_config(params, taus.back(), taus);
  cv.epsReg = epsReg;
  const RunResult u = run(datum, grid, cu);
  const RunResult v = run(datum, grid, cv);

  TimeChangeReport rep;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto& a = u.snapshots.at(k).u;
    const auto& b = v.snapshots.at(k).u;
    const double g = std::exp(fPrime0 * ts[k]);
    double gap = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      gap = std::max(gap, std::abs(a[i] - g * b[i]));
      norm = std::max(norm, std::abs(a[i]));
    }
    rep.times.push_back(ts[k]);
    rep.gaps.push_back(norm > 0.0 ? gap / norm : gap);
    rep.discrepancy = std::max(rep.discrepancy, rep.gaps.back());
  }
  return rep;
}

MonotonicityReport check_radial_monotonicity(const RunResult& result, const RadialGrid& grid) {
  MonotonicityReport rep;
  for (const auto& s : result.snapshots) {
    for (std::size_t i = 1; i < s.u.size(); ++i) {
      const double d = s.u[i] - s.u[i - 1];
      if (d > rep.worstSlope) {
        rep.worstSlope = d;
        rep.locus = Locus{grid.centers[i], s.t};
      }
    }
  }
  return rep;
}

Lemma42Iteration check_lemma42_iteration(const DiffusionParams& params, const ReactionSpec& f, double sigma,
                                         int jMax, const Lemma42GridOptions& opt) {
  if (jMax < 1) throw ParameterError("jMax must be at least 1");
  Lemma42Iteration out;
  out.schedule = lemma42_schedule(params, f, sigma);
  const auto& s = out.schedule;
  const auto datum = make_plateau_tail(s.epsTilde0, s.rhoTilde0Min, params);
  const double gh = params.gammaHat(), p = params.p;
  const double T = jMax * s.t0;
  // the tail grows at most like e^{f'(0) t}; keep it far below epsTilde0 at rMax
  const double lnEdge = std::log(s.rhoTilde0Min) + sigma * T;
  const double lnTail = (std::log(datum.a0) + f.fPrime0 * T - std::log(1e-3 * s.epsTilde0)) * gh / p;
  const double rMax = std::exp(std::max(lnEdge, lnTail) + 2.0);
  const auto grid = build_grid({GridMode::Stretched, 0.0, rMax, opt.cells, s.rhoTilde0Min, params.N});

  for (int j = 0; j <= jMax; ++j) out.times.push_back(j * s.t0);
  SolverConfig c = make_solver_config(params, T, out.times);
  c.reactionMode = ReactionMode::Full;
  c.reaction = f;
  // the chord floor must stay below the plateau value
  c.epsReg = std::min(opt.epsReg, s.epsTilde0);
  const RunResult run = fkpp::run([&](double r) { return datum(r); }, grid, c);

  out.pass = true;
  for (int j = 0; j <= jMax; ++j) {
    const auto& u = run.snapshots.at(j).u;
    const double edge = s.rhoTilde0Min * std::exp(sigma * out.times[j]);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.cells() && grid.centers[i] <= edge; ++i) margin = std::min(margin, u[i] - s.epsTilde0);
    out.margins.push_back(margin);
    if (!(margin >= 0.0)) out.pass = false;
  }
  return out;
}

}  // namespace fkpp
