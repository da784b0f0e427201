#include "fkpp/model_params.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fkpp/errors.hpp"

namespace fkpp {

namespace {

std::string fmt_params(const DiffusionParams& p) {
  std::ostringstream os;
  os << "(m=" << p.m << ", p=" << p.p << ", N=" << p.N << ")";
  return os.str();
}

void require_fast_good(const DiffusionParams& params, const char* what) {
  validate(params);
  Regime r = classify(params);
  if (r != Regime::FastGood) {
    throw RegimeError(std::string(what) + " requires the FastGood regime, got " + to_string(r) + " for " +
                      fmt_params(params));
  }
}

}  // namespace

void validate(const DiffusionParams& params) {
  if (!(params.m > 0.0) || !std::isfinite(params.m)) throw ParameterError("m must be a positive real");
  if (!(params.p > 1.0) || !std::isfinite(params.p)) throw ParameterError("p must be a real > 1");
  if (params.N < 1) throw ParameterError("N must be a positive integer");
}

DiffusionParams make_params(double m, double p, int N) {
  DiffusionParams params{m, p, N};
  validate(params);
  return params;
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::SlowOrPseudoLinear: return "SlowOrPseudoLinear";
    case Regime::FastGood: return "FastGood";
    case Regime::Critical: return "Critical";
    case Regime::VeryFast: return "VeryFast";
  }
  return "unknown";
}

Regime classify(const DiffusionParams& params, double criticalRelTol) {
  validate(params);
  const double gh = params.gammaHat();
  if (gh <= 0.0) return Regime::SlowOrPseudoLinear;
  const double pn = params.p / params.N;
  if (std::abs(gh - pn) <= criticalRelTol * pn) return Regime::Critical;
  return gh < pn ? Regime::FastGood : Regime::VeryFast;
}

ExponentInfo derive_exponents(const DiffusionParams& params, double criticalRelTol) {
  ExponentInfo info;
  info.regime = classify(params, criticalRelTol);
  info.gamma = params.gamma();
  info.gammaHat = params.gammaHat();
  return info;
}

ReactionSpec logistic(double rate) {
  if (!(rate > 0.0)) throw ParameterError("logistic rate must be positive");
  ReactionSpec spec;
  spec.kind = ReactionKind::Logistic;
  spec.rate = rate;
  spec.fPrime0 = rate;
  spec.fPrime1 = -rate;
  spec.f = [rate](double u) { return rate * u * (1.0 - u); };
  return spec;
}

void validate(const ReactionSpec& reaction) {
  if (!reaction.f) throw ParameterError("reaction evaluator missing");
  if (!(reaction.fPrime0 > 0.0)) throw ParameterError("reaction f'(0) must be positive");
  const auto& f = reaction.f;
  if (std::abs(f(0.0)) > 1e-12) throw ParameterError("reaction must satisfy f(0) = 0");
  if (std::abs(f(1.0)) > 1e-12) throw ParameterError("reaction must satisfy f(1) = 0");
  constexpr int n = 4097;
  const double h = 1.0 / (n - 1);
  for (int i = 1; i < n - 1; ++i) {
    const double u = i * h;
    const double fu = f(u);
    if (!(fu > 0.0)) {
      std::ostringstream os;
      os << "reaction must be positive on (0,1); f(" << u << ") = " << fu;
      throw ParameterError(os.str());
    }
    const double d2 = f(u - h) - 2.0 * fu + f(u + h);
    if (d2 > 1e-9) {
      std::ostringstream os;
      os << "reaction is not concave near u = " << u << " (second difference " << d2 << ")";
      throw ParameterError(os.str());
    }
  }
}

ReactionSpec custom_reaction(std::function<double(double)> f, double fPrime0, double fPrime1) {
  ReactionSpec spec;
  spec.kind = ReactionKind::Custom;
  spec.f = std::move(f);
  constexpr double h = 1e-6;
  if (!spec.f) throw ParameterError("reaction evaluator missing");
  // second-order one-sided differences
  spec.fPrime0 = fPrime0 > 0.0 ? fPrime0 : (-3.0 * spec.f(0.0) + 4.0 * spec.f(h) - spec.f(2.0 * h)) / (2.0 * h);
  spec.fPrime1 =
      fPrime1 < 0.0 ? fPrime1 : (3.0 * spec.f(1.0) - 4.0 * spec.f(1.0 - h) + spec.f(1.0 - 2.0 * h)) / (2.0 * h);
  spec.rate = spec.fPrime0;
  validate(spec);
  return spec;
}

double sigma_star(const DiffusionParams& params, double fPrime0, double criticalRelTol) {
  if (!(fPrime0 >= 0.0)) throw ParameterError("f'(0) must be non-negative");
  Regime r = classify(params, criticalRelTol);
  switch (r) {
    case Regime::FastGood: return params.gammaHat() / params.p * fPrime0;
    case Regime::Critical: return fPrime0 / params.N;
    default:
      throw RegimeError(std::string("sigma_star is undefined in the ") + to_string(r) + " regime for " +
                        fmt_params(params));
  }
}

double sigma_star(const DiffusionParams& params, const ReactionSpec& f, double criticalRelTol) {
  return sigma_star(params, f.fPrime0, criticalRelTol);
}

BarenblattConstants barenblatt_constants(const DiffusionParams& params) {
  require_fast_good(params, "barenblatt_constants");
  const double gh = params.gammaHat();
  const double p = params.p;
  const double N = params.N;
  BarenblattConstants c;
  c.alpha = 1.0 / (p / N - gh);
  c.k = gh / p * std::pow(c.alpha / N, 1.0 / (p - 1.0));
  return c;
}

double kappa(const DiffusionParams& params) {
  require_fast_good(params, "kappa");
  const double gh = params.gammaHat();
  const double p = params.p;
  return (p - gh * params.N) * std::pow(params.m * p, p - 1.0) / std::pow(gh, p);
}

DConstants d_constants(const DiffusionParams& params) {
  require_fast_good(params, "d_constants");
  const double gh = params.gammaHat();
  const double p = params.p;
  const double N = params.N;
  DConstants d;
  d.d1 = p * (p - gh * N) / (gh * gh);
  d.d2 = p * ((p - 1.0) * (p - gh) + gh * (N - 1.0)) / (gh * gh);
  d.d3 = std::pow(p / gh, 2.0 - p) * std::pow(params.m, 1.0 - p);
  return d;
}

SelfSimilarExponents self_similar_exponents(double lambda, double p) {
  if (!(p > 1.0)) throw ParameterError("p must be a real > 1");
  if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
  if (p > 2.0 && !(lambda < p / (p - 2.0))) throw ParameterError("lambda must be < p/(p-2) when p > 2");
  const double den = (1.0 - lambda) * p + 2.0 * lambda;
  return {-lambda / den, 1.0 / den};
}

double tau_infinity(double rate, double gammaHat) {
  const double a = rate * gammaHat;
  return a > 0.0 ? 1.0 / a : std::numeric_limits<double>::infinity();
}

double time_change(double t, double rate, double gammaHat) {
  if (!(t >= 0.0)) throw DomainError("time_change requires t >= 0");
  if (rate < 0.0 || !(gammaHat > 0.0)) throw ParameterError("time_change requires rate >= 0 and gammaHat > 0");
  const double a = rate * gammaHat;
  if (a == 0.0) return t;
  return -std::expm1(-a * t) / a;
}

double inverse_time_change(double tau, double rate, double gammaHat) {
  if (!(tau >= 0.0)) throw DomainError("inverse_time_change requires tau >= 0");
  if (rate < 0.0 || !(gammaHat > 0.0)) throw ParameterError("time_change requires rate >= 0 and gammaHat > 0");
  const double a = rate * gammaHat;
  if (a == 0.0) return tau;
  if (a * tau >= 1.0) throw DomainError("inverse_time_change requires tau < tau_infinity");
  return -std::log1p(-a * tau) / a;
}

ExponentBundle exponent_bundle(const DiffusionParams& params, const ReactionSpec& f) {
  require_fast_good(params, "exponent_bundle");
  ExponentBundle b;
  b.gamma = params.gamma();
  b.gammaHat = params.gammaHat();
  b.sigmaStar = sigma_star(params, f);
  auto bc = barenblatt_constants(params);
  b.alpha = bc.alpha;
  b.k = bc.k;
  b.kappa = kappa(params);
  auto d = d_constants(params);
  b.d1 = d.d1;
  b.d2 = d.d2;
  b.d3 = d.d3;
  b.tauInfinity = tau_infinity(f.fPrime0, b.gammaHat);
  return b;
}

double sphere_area(int N) {
  if (N < 1) throw ParameterError("N must be a positive integer");
  if (N == 1) return 2.0;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

}  // namespace fkpp
