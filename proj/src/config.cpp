#include "fkpp/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fkpp/errors.hpp"

namespace fkpp {

namespace {

struct Names {
  Preset preset;
  const char* name;
  const char* target;
};

const Names kPresets[] = {
    {Preset::OuterDecay, "outer_decay", "exponential decay to 0 uniformly in the outer set |x| >= e^{sigma t}, sigma > sigma*"},
    {Preset::InnerLevelsets, "inner_levelsets",
     "super-level sets u(x, j t0) >= epsTilde expanding like e^{sigma j t0}, sigma < sigma*"},
    {Preset::BandSigmaStar, "band_sigma_star", "level sets confined to C^{-1} e^{sigma* t} <= |x| <= C e^{sigma* t}"},
    {Preset::SlowControl, "slow_control", "linear fronts with travelling-wave speed c* when gamma >= 0"},
    {Preset::PlapAppendix, "plap_appendix", "self-similar growth H2 |x|^lambda <= U <= H1 |x|^lambda for the p-Laplacian"},
    {Preset::CriticalExplore, "critical_explore", "pseudo-Barenblatt solution and tail at the critical exponent"},
};

// Shortest %g form that reads back to the same double.
std::string fmt(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  if (v.empty()) throw std::invalid_argument("expected a number, got an empty value");
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || errno == ERANGE) throw std::invalid_argument("expected a number, got '" + v + "'");
  if (!std::isfinite(x)) throw std::invalid_argument("value must be finite");
  return x;
}

long long to_int(const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
    throw std::invalid_argument("expected an integer, got '" + v + "'");
  return x;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> to_doubles(const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_double(s));
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + fmt(xs[i]);
  return out;
}

double positive(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("must be positive");
  return x;
}

double unit_open(double x) {
  if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("must lie in (0,1)");
  return x;
}

template <class E, std::size_t K>
E lookup(const std::pair<E, const char*> (&table)[K], const std::string& v) {
  for (const auto& [e, name] : table)
    if (v == name) return e;
  std::string allowed;
  for (const auto& [e, name] : table) allowed += std::string(allowed.empty() ? "" : ", ") + name;
  throw std::invalid_argument("unknown value '" + v + "' (allowed: " + allowed + ")");
}

template <class E, std::size_t K>
const char* name_of(const std::pair<E, const char*> (&table)[K], E e) {
  for (const auto& [x, name] : table)
    if (x == e) return name;
  return "?";
}

const std::pair<GridMode, const char*> kGridModes[] = {
    {GridMode::Uniform, "uniform"}, {GridMode::LogUniform, "loguniform"}, {GridMode::Stretched, "stretched"}};
const std::pair<DatumKind, const char*> kDatumKinds[] = {
    {DatumKind::PlateauTail, "plateau_tail"}, {DatumKind::Compact, "compact"}, {DatumKind::Barenblatt, "barenblatt"}};
const std::pair<FieldKind, const char*> kFieldKinds[] = {
    {FieldKind::Barenblatt, "barenblatt"},   {FieldKind::Bernoulli, "bernoulli"},
    {FieldKind::KingMcCabe, "king_mccabe"},  {FieldKind::PseudoBarenblatt, "pseudo_barenblatt"},
    {FieldKind::TypeII, "type_ii"},          {FieldKind::CriticalTail, "critical_tail"}};

struct Key {
  const char* section;
  const char* name;
  std::function<void(LabConfig&, const std::string&)> set;
  std::function<std::string(const LabConfig&)> get;
};

#define NUM(sec, key, field, check)                                                     \
  Key {                                                                                 \
    sec, key, [](LabConfig& c, const std::string& v) { c.field = check(to_double(v)); }, \
        [](const LabConfig& c) { return fmt(c.field); }                                 \
  }

double omega_list_item(double x) { return unit_open(x); }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      NUM("params", "m", params.m, positive),
      NUM("params", "p",  params.p, [](double x) {
        if (!(x > 1.0)) throw std::invalid_argument("must exceed 1");
        return x;
      }),
      {"params", "N",
       [](LabConfig& c, const std::string& v) {
         const auto n = to_int(v);
         if (n < 1 || n > 64) throw std::invalid_argument("must be an integer in [1, 64]");
         c.params.N = static_cast<int>(n);
       },
       [](const LabConfig& c) { return std::to_string(c.params.N); }},
      NUM("params", "critical_rel_tol", criticalRelTol, positive),
      {"reaction", "kind",
       [](LabConfig&, const std::string& v) {
         if (v != "logistic") throw std::invalid_argument("only 'logistic' can be configured from text");
       },
       [](const LabConfig&) { return std::string("logistic"); }},
      NUM("reaction", "rate", rate, positive),
      {"grid", "mode", [](LabConfig& c, const std::string& v) { c.grid.mode = lookup(kGridModes, v); },
       [](const LabConfig& c) { return std::string(name_of(kGridModes, c.grid.mode)); }},
      NUM("grid", "r_max", grid.rMax, positive),
      {"grid", "cells",
       [](LabConfig& c, const std::string& v) {
         const auto n = to_int(v);
         if (n < 64 || n > 10000000) throw std::invalid_argument("must be an integer in [64, 1e7]");
         c.grid.cells = static_cast<int>(n);
       },
       [](const LabConfig& c) { return std::to_string(c.grid.cells); }},
      NUM("grid", "r_core", grid.rCore, positive),
      NUM("grid", "r_inner", grid.rInner, [](double x) {
        if (x < 0.0) throw std::invalid_argument("must be non-negative");
        return x;
      }),
      NUM("solver", "t_end", tEnd, [](double x) {
        if (x < 0.0) throw std::invalid_argument("must be non-negative");
        return x;
      }),
      {"solver", "snapshots",
       [](LabConfig& c, const std::string& v) {
         const auto n = to_int(v);
         if (n < 1 || n > 100000) throw std::invalid_argument("must be an integer in [1, 100000]");
         c.snapshots = static_cast<std::size_t>(n);
       },
       [](const LabConfig& c) { return std::to_string(c.snapshots); }},
      NUM("solver", "eps_reg", epsReg, positive),
      NUM("solver", "cfl_safety", cflSafety, unit_open),
      {"datum", "kind", [](LabConfig& c, const std::string& v) { c.datum.kind = lookup(kDatumKinds, v); },
       [](const LabConfig& c) { return std::string(name_of(kDatumKinds, c.datum.kind)); }},
      NUM("datum", "eps_tilde", datum.epsTilde, [](double x) {
        if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("must lie in (0,1]");
        return x;
      }),
      NUM("datum", "rho_tilde0", datum.rhoTilde0, positive),
      NUM("datum", "height", datum.height, [](double x) {
        if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("must lie in (0,1]");
        return x;
      }),
      NUM("datum", "radius", datum.radius, positive),
      NUM("datum", "mass", datum.mass, positive),
      NUM("datum", "t0", datum.t0, positive),
      {"evaluate", "field", [](LabConfig& c, const std::string& v) { c.evaluate.field = lookup(kFieldKinds, v); },
       [](const LabConfig& c) { return std::string(name_of(kFieldKinds, c.evaluate.field)); }},
      NUM("evaluate", "mass", evaluate.mass, positive),
      NUM("evaluate", "a", evaluate.a, positive),
      NUM("evaluate", "D", evaluate.D, positive),
      NUM("evaluate", "tc", evaluate.tc, positive),
      {"evaluate", "times",
       [](LabConfig& c, const std::string& v) {
         auto ts = to_doubles(v);
         if (ts.empty()) throw std::invalid_argument("needs at least one time");
         for (double t : ts)
           if (t < 0.0) throw std::invalid_argument("times must be non-negative");
         c.evaluate.times = ts;
       },
       [](const LabConfig& c) { return join(c.evaluate.times); }},
      {"experiment", "preset", [](LabConfig& c, const std::string& v) { c.experiment.preset = parse_preset(v); },
       [](const LabConfig& c) { return std::string(to_string(c.experiment.preset)); }},
      {"experiment", "omegas",
       [](LabConfig& c, const std::string& v) {
         auto ws = to_doubles(v);
         if (ws.empty()) throw std::invalid_argument("needs at least one level");
         for (double w : ws) omega_list_item(w);
         c.experiment.omegas = ws;
       },
       [](const LabConfig& c) { return join(c.experiment.omegas); }},
      NUM("experiment", "sigma_outer", experiment.sigmaOuter, [](double x) {
        if (!(x > 1.0)) throw std::invalid_argument("must exceed 1");
        return x;
      }),
      NUM("experiment", "sigma_inner", experiment.sigmaInner, unit_open),
      {"experiment", "j_max",
       [](LabConfig& c, const std::string& v) {
         const auto n = to_int(v);
         if (n < 1 || n > 50) throw std::invalid_argument("must be an integer in [1, 50]");
         c.experiment.jMax = static_cast<int>(n);
       },
       [](const LabConfig& c) { return std::to_string(c.experiment.jMax); }},
      NUM("experiment", "fit_start", experiment.fitStart, [](double x) {
        if (x < 0.0) throw std::invalid_argument("must be non-negative");
        return x;
      }),
      NUM("experiment", "lambda", experiment.lambda, positive),
      NUM("experiment", "tw_tol", experiment.twTol, positive),
      {"sweep", "m", [](LabConfig& c, const std::string& v) { c.sweep.m = to_doubles(v); },
       [](const LabConfig& c) { return join(c.sweep.m); }},
      {"sweep", "p", [](LabConfig& c, const std::string& v) { c.sweep.p = to_doubles(v); },
       [](const LabConfig& c) { return join(c.sweep.p); }},
      {"sweep", "N",
       [](LabConfig& c, const std::string& v) {
         c.sweep.N.clear();
         for (const auto& s : split_list(v)) c.sweep.N.push_back(static_cast<int>(to_int(s)));
       },
       [](const LabConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.sweep.N.size(); ++i) out += (i ? ", " : "") + std::to_string(c.sweep.N[i]);
         return out;
       }},
      {"sweep", "sigma", [](LabConfig& c, const std::string& v) { c.sweep.sigma = to_doubles(v); },
       [](const LabConfig& c) { return join(c.sweep.sigma); }},
      {"sweep", "omega", [](LabConfig& c, const std::string& v) { c.sweep.omega = to_doubles(v); },
       [](const LabConfig& c) { return join(c.sweep.omega); }},
      {"output", "dir",
       [](LabConfig& c, const std::string& v) {
         if (v.empty()) throw std::invalid_argument("must not be empty");
         c.outDir = v;
       },
       [](const LabConfig& c) { return c.outDir; }},
      {"run", "seed",
       [](LabConfig& c, const std::string& v) {
         errno = 0;
         char* end = nullptr;
         const unsigned long long s = std::strtoull(v.c_str(), &end, 10);
         if (v.empty() || v[0] == '-' || end != v.c_str() + v.size() || errno == ERANGE)
           throw std::invalid_argument("expected a non-negative integer, got '" + v + "'");
         c.seed = s;
       },
       [](const LabConfig& c) { return std::to_string(c.seed); }},
      {"run", "workers",
       [](LabConfig& c, const std::string& v) {
         const auto n = to_int(v);
         if (n < 1 || n > 256) throw std::invalid_argument("must be an integer in [1, 256]");
         c.workers = static_cast<int>(n);
       },
       [](const LabConfig& c) { return std::to_string(c.workers); }},
  };
  return table;
}

#undef NUM

const Key* find_key(const std::string& section, const std::string& name) {
  for (const auto& k : keys())
    if (section == k.section && name == k.name) return &k;
  return nullptr;
}

}  // namespace

const char* to_string(Preset preset) {
  for (const auto& n : kPresets)
    if (n.preset == preset) return n.name;
  return "?";
}

const char* preset_target(Preset preset) {
  for (const auto& n : kPresets)
    if (n.preset == preset) return n.target;
  return "?";
}

Preset parse_preset(const std::string& name) {
  for (const auto& n : kPresets)
    if (name == n.name) return n.preset;
  std::string allowed;
  for (const auto& n : kPresets) allowed += std::string(allowed.empty() ? "" : ", ") + n.name;
  throw ConfigError({{0, "experiment.preset", "unknown preset '" + name + "' (allowed: " + allowed + ")"}});
}

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> all = {Preset::OuterDecay,  Preset::InnerLevelsets, Preset::BandSigmaStar,
                                          Preset::SlowControl, Preset::PlapAppendix,   Preset::CriticalExplore};
  return all;
}

const char* to_string(DatumKind kind) { return name_of(kDatumKinds, kind); }
const char* to_string(FieldKind kind) { return name_of(kFieldKinds, kind); }

namespace {

std::vector<ConfigIssue> cross_field_issues(const LabConfig& c, int presetLine) {
  std::vector<ConfigIssue> issues;
  auto add = [&](std::string field, std::string msg) { issues.push_back({presetLine, std::move(field), std::move(msg)}); };
  Regime regime;
  try {
    regime = classify(c.params, c.criticalRelTol);
  } catch (const Error& e) {
    add("params", e.what());
    return issues;
  }
  const Preset pr = c.experiment.preset;
  const std::string name = to_string(pr);
  switch (pr) {
    case Preset::OuterDecay:
    case Preset::InnerLevelsets:
    case Preset::BandSigmaStar:
      if (regime != Regime::FastGood)
        add("experiment.preset", name + " needs the fast-diffusion regime 0 < gammaHat < p/N, but (m,p,N) is " +
                                     to_string(regime));
      break;
    case Preset::SlowControl:
      if (regime != Regime::SlowOrPseudoLinear)
        add("experiment.preset", name + " needs gamma >= 0, but (m,p,N) is " + std::string(to_string(regime)));
      break;
    case Preset::PlapAppendix:
      if (c.params.p > 2.0 && !(c.experiment.lambda < c.params.p / (c.params.p - 2.0)))
        add("experiment.lambda", "plap_appendix needs lambda < p/(p-2)");
      break;
    case Preset::CriticalExplore:
      if (regime != Regime::Critical)
        add("experiment.preset", name + " needs gammaHat = p/N, but (m,p,N) is " + std::string(to_string(regime)));
      break;
  }
  if (c.grid.mode == GridMode::LogUniform && !(c.grid.rInner > 0.0 && c.grid.rInner < c.grid.rMax))
    add("grid.r_inner", "loguniform grids need 0 < r_inner < r_max");
  if (c.grid.mode == GridMode::Stretched && !(c.grid.rCore < c.grid.rMax))
    add("grid.r_core", "stretched grids need r_core < r_max");
  for (double m : c.sweep.m)
    if (!(m > 0.0)) add("sweep.m", "sweep values must be positive");
  for (double p : c.sweep.p)
    if (!(p > 1.0)) add("sweep.p", "sweep values must exceed 1");
  for (int n : c.sweep.N)
    if (n < 1) add("sweep.N", "sweep values must be at least 1");
  for (double s : c.sweep.sigma)
    if (!(s > 0.0)) add("sweep.sigma", "sweep values must be positive");
  for (double w : c.sweep.omega)
    if (!(w > 0.0 && w < 1.0)) add("sweep.omega", "sweep values must lie in (0,1)");
  return issues;
}

}  // namespace

void validate_config(const LabConfig& config) {
  auto issues = cross_field_issues(config, 0);
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

LabConfig parse_config(const std::string& text) {
  LabConfig c;
  std::vector<ConfigIssue> issues;
  std::map<std::string, int> seen;
  std::string section;
  int presetLine = 0;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        issues.push_back({line, "", "malformed section header '" + s + "'"});
        continue;
      }
      section = trim(s.substr(1, s.size() - 2));
      bool known = false;
      for (const auto& k : keys()) known = known || section == k.section;
      if (!known) issues.push_back({line, section, "unknown section"});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      issues.push_back({line, "", "expected 'key = value', got '" + s + "'"});
      continue;
    }
    const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    const std::string field = section + "." + key;
    if (section.empty()) {
      issues.push_back({line, key, "key outside of any section"});
      continue;
    }
    const Key* k = find_key(section, key);
    if (!k) {
      issues.push_back({line, field, "unknown key"});
      continue;
    }
    if (auto it = seen.find(field); it != seen.end()) {
      issues.push_back({line, field, "duplicate key (first set on line " + std::to_string(it->second) + ")"});
      continue;
    }
    seen[field] = line;
    if (field == "experiment.preset") presetLine = line;
    try {
      k->set(c, value);
    } catch (const std::invalid_argument& e) {
      issues.push_back({line, field, e.what()});
    } catch (const ConfigError& e) {
      issues.push_back({line, field, e.issues.front().message});
    }
  }
  c.grid.N = c.params.N;
  if (issues.empty()) issues = cross_field_issues(c, presetLine);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

LabConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError({{0, "--config", "cannot read '" + path + "'"}});
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const LabConfig& config) {
  std::string out, section;
  for (const auto& k : keys()) {
    if (section != k.section) {
      section = k.section;
      out += (out.empty() ? "[" : "\n[") + section + "]\n";
    }
    const std::string v = k.get(config);
    out += std::string(k.name) + " =" + (v.empty() ? "" : " " + v) + "\n";
  }
  return out;
}

ReactionSpec reaction_of(const LabConfig& config) { return logistic(config.rate); }

std::vector<double> snapshot_times(const LabConfig& config) {
  std::vector<double> ts;
  for (std::size_t i = 0; i <= config.snapshots; ++i)
    ts.push_back(config.tEnd * static_cast<double>(i) / static_cast<double>(config.snapshots));
  return ts;
}

SolverConfig solver_of(const LabConfig& config) {
  SolverConfig s = make_solver_config(config.params, config.tEnd, snapshot_times(config));
  s.epsReg = config.epsReg;
  s.cflSafety = config.cflSafety;
  s.reactionMode = ReactionMode::Full;
  s.reaction = reaction_of(config);
  return s;
}

}  // namespace fkpp
