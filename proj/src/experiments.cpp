#include "fkpp/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <thread>

#include "fkpp/analytic_solutions.hpp"
#include "fkpp/errors.hpp"
#include "fkpp/fronts.hpp"
#include "fkpp/verify.hpp"

namespace fkpp {

const char* to_string(Command command) {
  switch (command) {
    case Command::Evaluate: return "evaluate";
    case Command::Simulate: return "simulate";
    case Command::Fronts: return "fronts";
    case Command::TwSpeed: return "twspeed";
    case Command::Verify: return "verify";
    case Command::Preset: return "preset";
  }
  return "?";
}

RadialGrid grid_of(const LabConfig& config) {
  GridSpec g = config.grid;
  g.N = config.params.N;
  return build_grid(g);
}

std::function<double(double)> datum_of(const LabConfig& config) {
  const DatumSpec& d = config.datum;
  switch (d.kind) {
    case DatumKind::PlateauTail: {
      const auto pt = make_plateau_tail(d.epsTilde, d.rhoTilde0, config.params);
      return [pt](double r) { return pt(r); };
    }
    case DatumKind::Compact:
      return [h = d.height, R = d.radius](double r) { return r < R ? h : 0.0; };
    case DatumKind::Barenblatt: {
      const auto B = BarenblattFast::with_mass(config.params, d.mass);
      return [B, t0 = d.t0](double r) { return B(r, t0); };
    }
  }
  throw DomainError("unknown datum kind");
}

namespace {

PlateauTailDatum plateau_of(const LabConfig& config) {
  if (config.datum.kind != DatumKind::PlateauTail)
    throw ConfigError({{0, "datum.kind", "this command needs a plateau_tail datum"}});
  return make_plateau_tail(config.datum.epsTilde, config.datum.rhoTilde0, config.params);
}

Json params_json(const LabConfig& c) {
  const auto e = derive_exponents(c.params, c.criticalRelTol);
  return {{"m", c.params.m},
          {"p", c.params.p},
          {"N", c.params.N},
          {"gamma", e.gamma},
          {"gamma_hat", e.gammaHat},
          {"regime", to_string(e.regime)}};
}

RunResult simulate_into(const LabConfig& c, const RadialGrid& grid, ArtifactTree& out) {
  const RunResult run = fkpp::run(datum_of(c), grid, solver_of(c));
  out.write_csv("snapshots.csv", snapshots_table(run, grid));
  CsvTable hist({"t", "mass", "dt", "boundary_max"});
  const auto& d = run.diagnostics;
  for (std::size_t i = 0; i < d.historyTimes.size(); ++i)
    hist.add({d.historyTimes[i], d.massHistory[i], d.dtHistory[i], d.boundaryMaxHistory[i]});
  out.write_csv("history.csv", hist);
  out.write_json("diagnostics.json", diagnostics_json(d));
  return run;
}

Json evaluate_cmd(const LabConfig& c, ArtifactTree& out) {
  const auto grid = grid_of(c);
  const EvaluateSpec& e = c.evaluate;
  AnalyticField field;
  switch (e.field) {
    case FieldKind::Barenblatt: field = BarenblattFast::with_mass(c.params, e.mass).field(); break;
    case FieldKind::Bernoulli: field = make_bernoulli_super(c.params, e.a, c.rate).field(); break;
    case FieldKind::KingMcCabe: field = make_km_similarity(c.params, e.a).field(); break;
    case FieldKind::PseudoBarenblatt: field = make_pseudo_barenblatt(c.params, e.D).field(); break;
    case FieldKind::TypeII: field = make_type_ii(c.params, e.D, e.tc).field(); break;
    case FieldKind::CriticalTail: {
      const DiffusionParams prm = c.params;
      critical_tail_coefficient(prm);
      field = {"critical_tail", [prm](double r, double t) { return eval_critical_tail(prm, t, r); }};
      break;
    }
  }
  CsvTable t({"r", "t", "u"});
  for (double time : e.times)
    for (double r : grid.centers) t.add({r, time, field(r, time)});
  out.write_csv("field.csv", t);
  return {{"field", to_string(e.field)}, {"points", t.rows()}};
}

Json simulate_cmd(const LabConfig& c, ArtifactTree& out) {
  const auto grid = grid_of(c);
  const RunResult run = simulate_into(c, grid, out);
  return {{"snapshots", run.snapshots.size()}, {"diagnostics", diagnostics_json(run.diagnostics)}};
}

// Level tracking plus rate or speed fits for every configured omega.
Json levels_json(const LabConfig& c, const RunResult& run, const RadialGrid& grid, ArtifactTree& out) {
  const auto trajs = track_levels(run, grid, c.experiment.omegas);
  out.write_csv("trajectories.csv", trajectories_table(trajs));
  const Regime regime = classify(c.params, c.criticalRelTol);
  Json levels = Json::array();
  for (const auto& tr : trajs) {
    Json j{{"omega", tr.omega}};
    try {
      if (regime == Regime::FastGood) {
        const double ss = sigma_star(c.params, reaction_of(c), c.criticalRelTol);
        const RateFit fit = fit_exp_rate(tr);
        const BandReport band = band_check(tr, ss);
        j["sigma_star"] = ss;
        j["rate_fit"] = rate_fit_json(fit);
        j["sigma_hat"] = fit.slope;
        j["ratio"] = fit.slope / ss;
        j["rate_ok"] = std::abs(fit.slope / ss - 1.0) <= 0.1;
        j["band"] = band_json(band);
      } else {
        j["speed_fit"] = rate_fit_json(fit_linear_speed(tr));
      }
    } catch (const Error& e) {
      j["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    }
    levels.push_back(j);
  }
  out.write_json("fits.json", levels);
  return levels;
}

Json fronts_cmd(const LabConfig& c, ArtifactTree& out) {
  const auto grid = grid_of(c);
  const RunResult run = simulate_into(c, grid, out);
  return {{"levels", levels_json(c, run, grid, out)}};
}

Json twspeed_cmd(const LabConfig& c, ArtifactTree& out) {
  const auto tw = critical_speed_shooting(c.params.m, c.params.p, reaction_of(c), c.experiment.twTol);
  CsvTable trace({"c", "super"});
  for (const auto& s : tw.trace) trace.add({s.c, s.cls == SpeedClass::Super ? 1.0 : 0.0});
  out.write_csv("shooting_trace.csv", trace);
  CsvTable prof({"xi", "phi"});
  for (const auto& [xi, phi] : tw.profileSamples) prof.add({xi, phi});
  out.write_csv("profile.csv", prof);
  return {{"c_star", tw.cStar}, {"c_lo", tw.cLo}, {"c_hi", tw.cHi}, {"shots", tw.trace.size()}};
}

Json ordering_json(const OrderingReport& r) {
  Json j{{"region", to_string(r.region.kind)},
         {"tol", r.tol},
         {"worst_violation", r.worstViolation},
         {"initial_violation", r.initialViolation},
         {"boundary_violation", r.boundaryViolation},
         {"lattice_points", r.latticePoints},
         {"status", to_string(r.status)},
         {"pass", r.pass}};
  if (r.region.kind == RegionKind::InnerSet) {
    j["sigma"] = r.region.sigma;
    j["t0"] = r.region.t0;
  }
  if (r.violationLocus) j["violation_locus"] = {{"r", r.violationLocus->r}, {"t", r.violationLocus->t}};
  return j;
}

// Random FastGood triple with gammaHat < min(1, p/N) so that m > 0.
DiffusionParams random_fast_good(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dimension(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int N = dimension(rng);
  const double p = 1.2 + 1.8 * unit(rng);
  const double cap = std::min(1.0, p / N);
  const double gh = cap * (0.05 + 0.9 * unit(rng));
  return {(1.0 - gh) / (p - 1.0), p, N};
}

Json verify_cmd(const LabConfig& c, ArtifactTree& out, bool& auditFailed) {
  const auto grid = grid_of(c);
  const auto f = reaction_of(c);
  const auto datum = plateau_of(c);
  const double ss = sigma_star(c.params, f, c.criticalRelTol);
  const double sigma = c.experiment.sigmaInner * ss;
  const AuditRunOptions opt{c.tEnd, c.snapshots, c.epsReg, c.cflSafety};
  const double tol = 1e-6;
  Json report;
  report["tol"] = tol;

  const auto bern = audit_bernoulli_super(c.params, f, datum, grid, opt, tol);
  report["bernoulli_super"] = {{"a", bern.super.a}, {"ordering", ordering_json(bern.report)}};

  const auto sched = lemma42_schedule(c.params, f, sigma);
  const auto bar = audit_barenblatt_below_linearized(c.params, sched.lambda, datum, grid, opt, tol);
  report["barenblatt_below_linearized"] = {{"lambda", sched.lambda},
                                           {"M1", bar.M1},
                                           {"theta1", bar.theta1},
                                           {"lower", ordering_json(bar.lowerReport)},
                                           {"upper", ordering_json(bar.upperReport)},
                                           {"pass", bar.pass}};

  const double t1 = 0.25 * c.tEnd;
  Json wj;
  bool wPass = false;
  try {
    const auto w = audit_w_pair(c.params, f, datum, grid, sigma, t1, opt, tol);
    wj = {{"eps_tilde", w.setup.epsTilde}, {"a0", w.setup.a0}, {"a1", w.setup.a1},   {"c0", w.setup.c0},
          {"nu", w.setup.nu},              {"lambda", w.setup.lambda},             {"t1", w.t1},
          {"q_min", w.qMin},               {"ordering", ordering_json(w.report)}};
    wPass = w.report.pass && w.qMin >= -1e-12;
  } catch (const Error& e) {
    wj = {{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
  }
  wj["pass"] = wPass;
  report["w_pair"] = wj;

  std::mt19937_64 rng(c.seed);
  Json barriers = Json::array();
  bool barriersOk = true;
  for (int i = 0; i < 5; ++i) {
    const auto prm = random_fast_good(rng);
    Json b{{"m", prm.m}, {"p", prm.p}, {"N", prm.N}};
    try {
      const auto fr = barrier_feasibility(prm, 0.1);
      b["branch"] = fr.branch;
      b["r0"] = fr.r0;
      b["worst_value"] = fr.worstValue;
      b["ok"] = fr.ok;
      barriersOk = barriersOk && fr.ok;
    } catch (const Error& e) {
      b["error"] = e.what();
      b["ok"] = false;
      barriersOk = false;
    }
    barriers.push_back(b);
  }
  report["barrier_feasibility"] = barriers;

  const bool pass = bern.report.pass && bar.pass && wPass && barriersOk;
  report["pass"] = pass;
  auditFailed = !pass;
  out.write_json("audit_report.json", report);
  return {{"pass", pass}};
}

Json outer_decay(const LabConfig& c, ArtifactTree& out) {
  const auto grid = grid_of(c);
  const auto f = reaction_of(c);
  const double gh = derive_exponents(c.params).gammaHat;
  const double sigma = c.experiment.sigmaOuter * sigma_star(c.params, f, c.criticalRelTol);
  const double exponent = f.fPrime0 - c.params.p * sigma / gh;
  const RunResult run = simulate_into(c, grid, out);
  std::vector<double> ts, maxU;
  for (const auto& s : run.snapshots) {
    const double rs = std::exp(sigma * s.t);
    double mx = -1.0;
    for (std::size_t i = 0; i < s.u.size(); ++i)
      if (grid.centers[i] >= rs) mx = std::max(mx, s.u[i]);
    if (mx < 0.0) continue;  // outer set beyond the grid
    ts.push_back(s.t);
    maxU.push_back(mx);
  }
  std::size_t k0 = 0;
  while (k0 < ts.size() && ts[k0] < c.experiment.fitStart) ++k0;
  if (k0 + 2 > ts.size()) throw NumericError("too few snapshots after fit_start inside the grid");
  const double K = maxU[k0] * std::exp(-exponent * ts[k0]);
  CsvTable t({"t", "r_sigma", "max_u", "bound"});
  bool bounded = true;
  double maxSlope = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double bound = K * std::exp(exponent * ts[k]);
    t.add({ts[k], std::exp(sigma * ts[k]), maxU[k], bound});
    if (k < k0) continue;
    bounded = bounded && maxU[k] <= bound * (1.0 + 1e-9);
    if (k > k0) maxSlope = std::max(maxSlope, (std::log(maxU[k]) - std::log(maxU[k - 1])) / (ts[k] - ts[k - 1]));
  }
  out.write_csv("outer_decay.csv", t);
  return {{"sigma", sigma},
          {"predicted_exponent", exponent},
          {"K", K},
          {"t_fit_start", ts[k0]},
          {"bounded", bounded},
          {"max_log_slope", maxSlope},
          {"diagnostics", diagnostics_json(run.diagnostics)}};
}

Json inner_levelsets(const LabConfig& c, ArtifactTree& out) {
  const auto f = reaction_of(c);
  const double sigma = c.experiment.sigmaInner * sigma_star(c.params, f, c.criticalRelTol);
  const auto it = check_lemma42_iteration(c.params, f, sigma, c.experiment.jMax);
  CsvTable t({"j", "t", "radius", "margin"});
  for (std::size_t j = 0; j < it.times.size(); ++j)
    t.add({static_cast<double>(j), it.times[j], it.schedule.rhoTilde0Min * std::exp(sigma * it.times[j]),
           it.margins[j]});
  out.write_csv("inner_levelsets.csv", t);
  const auto& s = it.schedule;
  return {{"sigma", sigma},
          {"schedule",
           {{"delta", s.delta}, {"lambda", s.lambda}, {"t0", s.t0}, {"eps_tilde0", s.epsTilde0},
            {"rho_tilde0_min", s.rhoTilde0Min}, {"M1", s.M1}, {"theta1", s.theta1}}},
          {"pass", it.pass}};
}

Json band_sigma_star(const LabConfig& c, ArtifactTree& out) {
  const auto grid = grid_of(c);
  const RunResult run = simulate_into(c, grid, out);
  return {{"sigma_star", sigma_star(c.params, reaction_of(c), c.criticalRelTol)},
          {"levels", levels_json(c, run, grid, out)},
          {"diagnostics", diagnostics_json(run.diagnostics)}};
}

Json slow_control(const LabConfig& c, ArtifactTree& out) {
  const auto grid = grid_of(c);
  const RunResult run = simulate_into(c, grid, out);
  Json levels = levels_json(c, run, grid, out);
  const auto tw = critical_speed_shooting(c.params.m, c.params.p, reaction_of(c), c.experiment.twTol);
  for (auto& l : levels) {
    if (!l.contains("speed_fit")) continue;
    const double v = l["speed_fit"]["slope"].get<double>();
    l["speed_ratio"] = v / tw.cStar;
    l["speed_ok"] = std::abs(v / tw.cStar - 1.0) <= 0.1;
  }
  return {{"c_star", tw.cStar}, {"c_lo", tw.cLo}, {"c_hi", tw.cHi}, {"levels", levels}};
}

Json plap_appendix(const LabConfig& c, ArtifactTree& out) {
  const auto grid = grid_of(c);
  SolverConfig s;
  s.operatorMode = OperatorMode::PLaplacian;
  s.p = c.params.p;
  s.epsReg = c.epsReg;
  s.cflSafety = c.cflSafety;
  s.tEnd = c.tEnd;
  s.snapshotTimes = snapshot_times(c);
  s.snapshotTimes.erase(s.snapshotTimes.begin());  // the profile is undefined at t = 0
  const double lambda = c.experiment.lambda;
  const RunResult run = run_plap_increasing(lambda, grid, s);
  const auto F = self_similar_profile(run.snapshots.back(), grid, lambda, c.params.p);
  CsvTable t({"xi", "F", "F_over_xi_lambda"});
  double worstDrop = 0.0, lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  const double xiMax = F.back().xi;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double ratio = F[i].F / std::pow(F[i].xi, lambda);
    t.add({F[i].xi, F[i].F, ratio});
    if (i > 0) worstDrop = std::max(worstDrop, F[i - 1].F - F[i].F);
    if (F[i].xi >= xiMax / 10.0) {
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  out.write_csv("profile.csv", t);
  out.write_json("diagnostics.json", diagnostics_json(run.diagnostics));
  return {{"lambda", lambda},
          {"worst_profile_drop", worstDrop},
          {"outer_decade_ratio_min", lo},
          {"outer_decade_ratio_max", hi},
          {"pass", worstDrop <= 1e-8 && lo >= 0.95 && hi <= 1.05}};
}

Json critical_explore(const LabConfig& c, ArtifactTree& out) {
  const auto grid = grid_of(c);
  const auto P = make_pseudo_barenblatt(c.params, c.evaluate.D);
  CsvTable t({"r", "t", "pseudo_barenblatt", "critical_tail"});
  for (double time : c.evaluate.times) {
    for (double r : grid.centers) {
      const bool tailDefined = r > 1.0 && time > 0.0;
      t.add_cells({format_double(r), format_double(time), format_double(P(r, time)),
                   tailDefined ? format_double(eval_critical_tail(c.params, time, r)) : std::string()});
    }
  }
  out.write_csv("critical.csv", t);
  // log-log slope of the profile across the outer two decades of the grid
  const double r2 = grid.centers.back(), r1 = r2 / 100.0, t0 = c.evaluate.times.front();
  const double slope = (std::log(P(r2, t0)) - std::log(P(r1, t0))) / std::log(r2 / r1);
  return {{"D", c.evaluate.D},
          {"tail_log_slope", slope},
          {"expected_slope", -static_cast<double>(c.params.N)},
          {"tail_coefficient", critical_tail_coefficient(c.params)}};
}

Json preset_cmd(const LabConfig& c, ArtifactTree& out) {
  switch (c.experiment.preset) {
    case Preset::OuterDecay: return outer_decay(c, out);
    case Preset::InnerLevelsets: return inner_levelsets(c, out);
    case Preset::BandSigmaStar: return band_sigma_star(c, out);
    case Preset::SlowControl: return slow_control(c, out);
    case Preset::PlapAppendix: return plap_appendix(c, out);
    case Preset::CriticalExplore: return critical_explore(c, out);
  }
  throw DomainError("unknown preset");
}

}  // namespace

Outcome execute(Command command, const LabConfig& config, const std::filesystem::path& outDir) {
  Outcome o;
  Json header{{"command", to_string(command)}, {"seed", config.seed}};
  if (command == Command::Preset) {
    header["preset"] = to_string(config.experiment.preset);
    header["target"] = preset_target(config.experiment.preset);
  }
  ArtifactTree out(outDir);
  out.write_text("config.txt", serialize_config(config));
  try {
    if (command == Command::Preset) validate_config(config);
    header["params"] = params_json(config);
    bool auditFailed = false;
    switch (command) {
      case Command::Evaluate: o.summary = evaluate_cmd(config, out); break;
      case Command::Simulate: o.summary = simulate_cmd(config, out); break;
      case Command::Fronts: o.summary = fronts_cmd(config, out); break;
      case Command::TwSpeed: o.summary = twspeed_cmd(config, out); break;
      case Command::Verify: o.summary = verify_cmd(config, out, auditFailed); break;
      case Command::Preset: o.summary = preset_cmd(config, out); break;
    }
    o.exitCode = auditFailed ? 4 : 0;
    header["status"] = auditFailed ? "audit_failure" : "ok";
  } catch (const Error& e) {
    o.exitCode = exit_code_for(e.kind());
    Json err{{"kind", to_string(e.kind())}, {"message", e.what()}, {"exit_code", o.exitCode}};
    if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) {
      Json issues = Json::array();
      for (const auto& is : ce->issues) issues.push_back({{"line", is.line}, {"field", is.field}, {"message", is.message}});
      err["issues"] = issues;
    }
    o.summary = {{"error", err}};
    out.write_json("error.json", err);
    header["status"] = "error";
  } catch (const std::exception& e) {
    o.exitCode = 3;
    Json err{{"kind", "internal"}, {"message", e.what()}, {"exit_code", o.exitCode}};
    o.summary = {{"error", err}};
    out.write_json("error.json", err);
    header["status"] = "error";
  }
  out.write_json("summary.json", o.summary);
  header["exit_code"] = o.exitCode;
  out.write_manifest(header);
  return o;
}

Outcome run_experiment(const LabConfig& config) { return execute(Command::Preset, config, config.outDir); }

std::vector<SweepCell> sweep_cells(const LabConfig& tmpl) {
  const SweepAxes& a = tmpl.sweep;
  auto orOne = [](const std::vector<double>& v, double d) { return v.empty() ? std::vector<double>{d} : v; };
  const auto ms = orOne(a.m, tmpl.params.m), ps = orOne(a.p, tmpl.params.p);
  const auto Ns = a.N.empty() ? std::vector<int>{tmpl.params.N} : a.N;
  const bool inner = tmpl.experiment.preset == Preset::InnerLevelsets;
  const auto sigmas = orOne(a.sigma, inner ? tmpl.experiment.sigmaInner : tmpl.experiment.sigmaOuter);
  const bool omegaAxis = !a.omega.empty();
  const auto omegas = orOne(a.omega, 0.0);
  std::vector<SweepCell> cells;
  for (double m : ms)
    for (double p : ps)
      for (int N : Ns)
        for (double s : sigmas)
          for (double w : omegas) {
            LabConfig c = tmpl;
            c.sweep = {};
            c.params = {m, p, N};
            c.grid.N = N;
            (inner ? c.experiment.sigmaInner : c.experiment.sigmaOuter) = s;
            if (omegaAxis) c.experiment.omegas = {w};
            char dir[32];
            std::snprintf(dir, sizeof dir, "cells/cell_%04zu", cells.size());
            c.outDir = (std::filesystem::path(tmpl.outDir) / dir).string();
            cells.push_back({c, dir});
          }
  return cells;
}

Outcome sweep(const LabConfig& tmpl, const std::filesystem::path& outDir) {
  auto cells = sweep_cells(tmpl);
  std::vector<Outcome> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++)
      results[i] = execute(Command::Preset, cells[i].config, outDir / cells[i].dir);
  };
  const int nThreads = std::max(1, std::min<int>(tmpl.workers, static_cast<int>(cells.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < nThreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  CsvTable table({"cell", "m", "p", "N", "sigma_factor", "omega", "regime", "sigma_star", "sigma_hat", "ratio",
                  "c_band", "rate_ok", "band_ok", "status", "exit_code", "error"});
  std::size_t failed = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const LabConfig& c = cells[i].config;
    const Json& s = results[i].summary;
    std::string regime;
    try {
      regime = to_string(classify(c.params, c.criticalRelTol));
    } catch (const Error&) {
      regime = "invalid";
    }
    auto num = [](const Json& j, const char* key) {
      return j.contains(key) && j[key].is_number() ? format_double(j[key].get<double>()) : std::string();
    };
    auto flag = [](const Json& j, const char* key) {
      return j.contains(key) && j[key].is_boolean() ? std::string(j[key].get<bool>() ? "1" : "0") : std::string();
    };
    Json level = Json::object();
    if (s.contains("levels") && !s["levels"].empty()) level = s["levels"][0];
    const double sf = c.experiment.preset == Preset::InnerLevelsets ? c.experiment.sigmaInner : c.experiment.sigmaOuter;
    std::string err;
    if (s.contains("error")) err = s["error"]["message"].get<std::string>();
    if (results[i].exitCode != 0) ++failed;
    table.add_cells({cells[i].dir, format_double(c.params.m), format_double(c.params.p), std::to_string(c.params.N),
                     format_double(sf), level.contains("omega") ? num(level, "omega") : std::string(), regime,
                     num(level, "sigma_star"), num(level, "sigma_hat"), num(level, "ratio"),
                     level.contains("band") ? num(level["band"], "c_band") : std::string(), flag(level, "rate_ok"),
                     level.contains("band") ? flag(level["band"], "ok") : std::string(),
                     results[i].exitCode == 0 ? "ok" : "failed", std::to_string(results[i].exitCode), err});
  }
  ArtifactTree out(outDir);
  out.write_text("config.txt", serialize_config(tmpl));
  out.write_csv("sweep.csv", table);
  for (const auto& cell : cells) {
    std::ifstream f(outDir / cell.dir / "manifest.json", std::ios::binary);
    const Json m = Json::parse(f);
    for (const auto& file : m["files"]) out.record_existing(cell.dir + "/" + file["path"].get<std::string>());
    out.record_existing(cell.dir + "/manifest.json");
  }
  Outcome o;
  o.summary = {{"cells", cells.size()}, {"failed", failed}};
  out.write_json("summary.json", o.summary);
  out.write_manifest({{"command", "sweep"},
                      {"preset", to_string(tmpl.experiment.preset)},
                      {"target", preset_target(tmpl.experiment.preset)},
                      {"seed", tmpl.seed},
                      {"exit_code", 0}});
  return o;
}

}  // namespace fkpp
