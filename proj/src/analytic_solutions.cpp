#include "fkpp/analytic_solutions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "fkpp/errors.hpp"

namespace fkpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_regime(const DiffusionParams& params, Regime want, const char* what) {
  Regime got = classify(params);
  if (got != want) {
    throw RegimeError(std::string(what) + " requires the " + to_string(want) + " regime, got " + to_string(got));
  }
}

struct MassIntegral {
  double value;
  double error;
};

MassIntegral mass_integral(const DiffusionParams& params, double C) {
  const auto bc = barenblatt_constants(params);
  const double gh = params.gammaHat();
  const double q = params.p / (params.p - 1.0);
  const double e = (params.p - 1.0) / gh;
  const int N = params.N;
  const double k = bc.k;
  auto integrand = [=](double r) {
    if (r <= 0.0) return N == 1 ? std::pow(C, -e) : 0.0;
    return std::pow(r, N - 1) * std::pow(C + k * std::pow(r, q), -e);
  };
  // Split at the scale where both terms of the bracket balance; beyond it use r = rs e^s.
  const double rs = std::pow(C / k, 1.0 / q);
  // evaluated in logs so the mapped infinite interval never overflows
  const double lnk = std::log(k);
  auto outer = [&](double s) {
    const double lr = std::log(rs) + s;
    const double lb = q * lr + lnk + std::log1p(C * std::exp(-q * lr - lnk));
    return std::exp(N * lr - e * lb);
  };
  using boost::math::quadrature::gauss_kronrod;
  double err1 = 0.0, err2 = 0.0;
  const double I1 = gauss_kronrod<double, 61>::integrate(integrand, 0.0, rs, 12, 1e-13, &err1);
  const double I2 = gauss_kronrod<double, 61>::integrate(outer, 0.0, kInf, 12, 1e-13, &err2);
  const double w = sphere_area(N);
  return {w * (I1 + I2), w * (err1 + err2)};
}

}  // namespace

double barenblatt_mass_of_C(const DiffusionParams& params, double C) {
  if (!(C > 0.0)) throw ParameterError("Barenblatt constant C must be positive");
  auto res = mass_integral(params, C);
  if (!std::isfinite(res.value) || res.error > 1e-9 * std::abs(res.value)) {
    std::ostringstream os;
    os << "Barenblatt mass quadrature did not converge: value " << res.value << ", error estimate " << res.error;
    throw NumericError(os.str());
  }
  return res.value;
}

double normalize_mass(const DiffusionParams& params, double M) {
  if (!(M > 0.0) || !std::isfinite(M)) throw ParameterError("mass M must be positive");
  require_regime(params, Regime::FastGood, "normalize_mass");
  const double gh = params.gammaHat();
  const double p = params.p;
  const double N = params.N;
  const double E = (p - 1.0) * (N / p - 1.0 / gh);
  const double M1 = barenblatt_mass_of_C(params, 1.0);
  const double guess = std::pow(M / M1, 1.0 / E);
  // mass(C) = M1 C^E, so Newton in ln C converges in one or two steps
  double lnC = std::log(guess);
  for (int it = 0; it < 4; ++it) {
    const double r = std::log(barenblatt_mass_of_C(params, std::exp(lnC)) / M);
    if (!std::isfinite(r)) throw NumericError("normalize_mass: non-finite mass residual");
    lnC -= r / E;
    if (std::abs(r) < 1e-14) break;
  }
  const double C = std::exp(lnC);
  const double rel = std::abs(barenblatt_mass_of_C(params, C) / M - 1.0);
  if (rel > 1e-8) {
    std::ostringstream os;
    os << "normalize_mass: residual " << rel << " exceeds 1e-8";
    throw NumericError(os.str());
  }
  return C;
}

double barenblatt_D_from_C(const DiffusionParams& params, double C) {
  const auto bc = barenblatt_constants(params);
  const double e = (params.p - 1.0) / params.gammaHat();
  return C * std::pow(bc.alpha / params.N, bc.alpha / e);
}

void BarenblattFast::init_constants(const DiffusionParams& params) {
  require_regime(params, Regime::FastGood, "BarenblattFast");
  params_ = params;
  const auto bc = barenblatt_constants(params);
  alpha_ = bc.alpha;
  k_ = bc.k;
  q_ = params.p / (params.p - 1.0);
  e_ = (params.p - 1.0) / params.gammaHat();
}

BarenblattFast BarenblattFast::with_mass(const DiffusionParams& params, double M) {
  BarenblattFast B;
  B.init_constants(params);
  B.form_ = Formulation::MassForm;
  B.mass_ = M;
  B.C_ = normalize_mass(params, M);
  B.D_ = barenblatt_D_from_C(params, B.C_);
  return B;
}

BarenblattFast BarenblattFast::with_C(const DiffusionParams& params, double C) {
  BarenblattFast B;
  B.init_constants(params);
  B.form_ = Formulation::MassForm;
  B.C_ = C;
  B.D_ = barenblatt_D_from_C(params, C);
  B.mass_ = barenblatt_mass_of_C(params, C);
  return B;
}

BarenblattFast BarenblattFast::with_D(const DiffusionParams& params, double D) {
  if (!(D > 0.0)) throw ParameterError("Barenblatt constant D must be positive");
  BarenblattFast B;
  B.init_constants(params);
  B.form_ = Formulation::DForm;
  B.D_ = D;
  B.C_ = D * std::pow(params.N / B.alpha_, B.alpha_ / B.e_);
  B.mass_ = barenblatt_mass_of_C(params, B.C_);
  return B;
}

double BarenblattFast::profile(double xi) const {
  return std::pow(C_ + k_ * std::pow(std::abs(xi), q_), -e_);
}

double BarenblattFast::time_scale() const { return std::pow(params_.m, params_.p - 1.0); }

double BarenblattFast::operator()(double r, double t) const {
  if (!(t > 0.0)) throw DomainError("Barenblatt evaluation requires t > 0");
  return absorbed(r, time_scale() * t);
}

double BarenblattFast::absorbed(double r, double t) const {
  if (!(t > 0.0)) throw DomainError("Barenblatt evaluation requires t > 0");
  r = std::abs(r);
  const int N = params_.N;
  if (form_ == Formulation::MassForm) {
    return std::pow(t, -alpha_) * profile(r * std::pow(t, -alpha_ / N));
  }
  const double R = std::pow(N / alpha_ * t, alpha_ / N);
  const double gh = params_.gammaHat();
  return std::pow(R, -N) * std::pow(D_ + gh / params_.p * std::pow(r / R, q_), -e_);
}

AnalyticField BarenblattFast::field() const {
  BarenblattFast copy = *this;
  return {"barenblatt", [copy](double r, double t) { return copy(r, t); }};
}

double eval_barenblatt(const BarenblattFast& B, double r, double t) { return B(r, t); }

ProfileBounds profile_bounds(const BarenblattFast& B) {
  const auto& params = B.params();
  const double gh = params.gammaHat();
  const double s = params.p / gh;
  ProfileBounds out;
  out.K1 = std::pow(B.k(), -(params.p - 1.0) / gh);
  auto g = [&](double lnxi) {
    const double xi = std::exp(lnxi);
    return B.profile(xi) * (1.0 + std::pow(xi, s));
  };
  // coarse scan in ln(xi), then Brent refinement around the best node
  constexpr int n = 4001;
  const double lo = std::log(1e-10), hi = std::log(1e10);
  int best = 0;
  double bestVal = g(lo);
  for (int i = 1; i < n; ++i) {
    const double v = g(lo + (hi - lo) * i / (n - 1));
    if (v < bestVal) {
      bestVal = v;
      best = i;
    }
  }
  const double h = (hi - lo) / (n - 1);
  const double a = lo + h * std::max(0, best - 1);
  const double b = lo + h * std::min(n - 1, best + 1);
  auto [x, v] = boost::math::tools::brent_find_minima(g, a, b, 60);
  out.K2 = std::min(v, bestVal);
  out.xiAtK2 = v <= bestVal ? std::exp(x) : std::exp(lo + h * best);
  const double g0 = B.profile(0.0);
  if (g0 < out.K2) {
    out.K2 = g0;
    out.xiAtK2 = 0.0;
  }
  return out;
}

double BernoulliSuper::G(double t) const {
  if (!(t >= 0.0)) throw DomainError("Bernoulli super-solution requires t >= 0");
  const double gh = params.gammaHat();
  const double kap = kappa(params);
  const double base = a * std::exp(gh * rate * t) - kap / rate;
  return std::pow(std::max(base, 0.0), 1.0 / gh);
}

double BernoulliSuper::operator()(double r, double t) const {
  r = std::abs(r);
  if (r == 0.0) throw DomainError("Bernoulli super-solution has a pole at x = 0");
  return std::pow(r, -params.p / params.gammaHat()) * G(t);
}

AnalyticField BernoulliSuper::field() const {
  BernoulliSuper copy = *this;
  return {"bernoulli_super", [copy](double r, double t) {
            return r == 0.0 ? std::numeric_limits<double>::infinity() : copy(r, t);
          }};
}

BernoulliSuper make_bernoulli_super(const DiffusionParams& params, double a, double rate) {
  require_regime(params, Regime::FastGood, "BernoulliSuper");
  if (!(rate > 0.0)) throw ParameterError("Bernoulli rate must be positive");
  if (!(a >= kappa(params) / rate)) throw ParameterError("Bernoulli super-solution requires a >= kappa");
  return BernoulliSuper{params, a, rate};
}

double eval_bernoulli_super(const BernoulliSuper& S, double r, double t) { return S(r, t); }

double KMSimilarity::operator()(double r, double t) const {
  const double num = aHat * std::exp(t);
  return num / (std::pow(std::abs(r), params.p / params.gammaHat()) + num);
}

double KMSimilarity::level_radius(double omega, double t) const {
  if (!(omega > 0.0 && omega < 1.0)) throw ParameterError("omega must lie in (0,1)");
  return std::pow(aHat * std::exp(t) * (1.0 - omega) / omega, params.gammaHat() / params.p);
}

AnalyticField KMSimilarity::field() const {
  KMSimilarity copy = *this;
  return {"km_similarity", [copy](double r, double t) { return copy(r, t); }};
}

KMSimilarity make_km_similarity(const DiffusionParams& params, double aHat) {
  require_regime(params, Regime::FastGood, "KMSimilarity");
  if (!(aHat > 0.0)) throw ParameterError("aHat must be positive");
  return KMSimilarity{params, aHat};
}

double eval_km_profile(const KMSimilarity& K, double r, double t) { return K(r, t); }

double BarrierSub::operator()(double r, double t) const {
  const double et = std::exp(t);
  return et / (b * std::pow(std::abs(r), params.p / params.gammaHat()) + c * et);
}

AnalyticField BarrierSub::field() const {
  BarrierSub copy = *this;
  return {"barrier_sub", [copy](double r, double t) { return copy(r, t); }};
}

BarrierSub make_barrier_sub(const DiffusionParams& params, double b, double c, double r0, double t0) {
  require_regime(params, Regime::FastGood, "BarrierSub");
  if (!(b > 0.0)) throw ParameterError("barrier b must be positive");
  if (!(c > 1.0)) throw ParameterError("barrier c must exceed 1");
  if (!(r0 > 0.0)) throw ParameterError("barrier r0 must be positive");
  if (!(t0 >= 0.0)) throw ParameterError("barrier t0 must be non-negative");
  return BarrierSub{params, b, c, r0, t0};
}

double eval_barrier_sub(const BarrierSub& B, double r, double t) {
  if (t < B.t0) throw DomainError("barrier sub-solution is defined for t >= t0");
  return B(r, t);
}

double barrier_sign_function(const DiffusionParams& params, double b, double c, double r0, double xi) {
  const auto d = d_constants(params);
  const double gh = params.gammaHat();
  const double p = params.p;
  return d.d3 * (c - 1.0) / std::pow(b, p - 1.0) * std::pow(r0, p) * std::pow(xi, 1.0 + gh) *
             std::pow(b + c * xi, p - 1.0 - gh) -
         d.d2 * c * xi + b * d.d1;
}

FeasibilityReport barrier_feasibility(const DiffusionParams& params, double eps, std::optional<double> r0Candidate,
                                      std::size_t gridPoints) {
  require_regime(params, Regime::FastGood, "barrier_feasibility");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0,1)");
  if (gridPoints < 2) throw ParameterError("certificate grid needs at least 2 points");
  FeasibilityReport rep;
  const double gh = params.gammaHat();
  const double p = params.p;
  const auto d = d_constants(params);
  rep.d = d;
  rep.eps = eps;
  rep.b = 1.0;
  rep.c = 1.0 / (1.0 - eps);
  rep.branch = gh <= p - 1.0 ? 1 : 2;
  const double A = std::pow(1.0 + d.d1 / d.d2, gh - (p - 1.0));
  rep.r0pBound1 = std::pow(d.d2, gh + 1.0) * std::pow(1.0 - eps, -gh) / (std::pow(d.d1, gh) * d.d3 * (gh + 1.0)) / eps;
  rep.r0pBound2 = d.d2 * d.d2 * std::pow(d.d1 + d.d1 / d.d2, gh - (p - 1.0)) / (p * d.d1 * d.d3) *
                  std::pow(eps, -1.0 / gh);
  rep.r0pBound2Compatible = std::pow(d.d2, 1.0 + gh) * A * std::pow(1.0 - eps, -gh) / (p * std::pow(d.d1, gh) * d.d3) / eps;
  double r0p = std::max(rep.r0pBound1, rep.r0pBound2);
  if (rep.branch == 2) r0p = std::max(r0p, rep.r0pBound2Compatible);
  rep.r0Min = std::pow(r0p, 1.0 / p);
  rep.r0 = r0Candidate ? *r0Candidate : rep.r0Min;
  if (!(rep.r0 > 0.0)) throw ParameterError("r0 must be positive");

  const double b = rep.b;
  const double c = rep.c;
  const double r0pUsed = std::pow(rep.r0, p);
  double xi0g;
  if (rep.branch == 1) {
    xi0g = d.d2 * c * std::pow(b, gh) / (d.d3 * (1.0 + gh) * r0pUsed * (c - 1.0));
  } else {
    xi0g = d.d2 * A * c * std::pow(b, gh) / (p * d.d3 * r0pUsed * (c - 1.0));
  }
  rep.xi0 = std::pow(xi0g, 1.0 / gh);
  rep.compatible = c <= d.d1 / d.d2 * b / rep.xi0 * (1.0 + 1e-12);

  rep.gridPoints = gridPoints;
  const double lo = std::log(1e-8), hi = std::log(1e8);
  rep.worstValue = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gridPoints; ++i) {
    const double xi = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(gridPoints - 1));
    const double v = barrier_sign_function(params, b, c, rep.r0, xi);
    if (v < rep.worstValue) {
      rep.worstValue = v;
      rep.worstXi = xi;
    }
  }
  rep.smallXiPositive = b * d.d1 > 0.0;
  rep.largeXiPositive = d.d3 * (c - 1.0) * r0pUsed * std::pow(c, p - 1.0 - gh) > 0.0 && p > 1.0;
  rep.certificate = rep.worstValue >= 0.0 && rep.smallXiPositive && rep.largeXiPositive;
  if (!rep.certificate) {
    std::ostringstream os;
    os << "barrier sign condition violated: C_r0(" << rep.worstXi << ") = " << rep.worstValue << " with r0 = " << rep.r0;
    throw FeasibilityError(os.str(), rep.worstXi, rep.worstValue);
  }
  rep.ok = rep.certificate && rep.compatible;
  return rep;
}

double PlateauTailDatum::operator()(double r) const {
  r = std::abs(r);
  if (r <= rhoTilde0) return epsTilde;
  return a0 * std::pow(r, -tailExponent);
}

PlateauTailDatum make_plateau_tail(double epsTilde, double rhoTilde0, const DiffusionParams& params) {
  if (!(epsTilde > 0.0 && epsTilde < 1.0)) throw ParameterError("epsTilde must lie in (0,1)");
  if (!(rhoTilde0 > 0.0)) throw ParameterError("rhoTilde0 must be positive");
  validate(params);
  const double gh = params.gammaHat();
  if (!(gh > 0.0)) throw RegimeError("plateau-tail datum needs gammaHat > 0");
  PlateauTailDatum d;
  d.epsTilde = epsTilde;
  d.rhoTilde0 = rhoTilde0;
  d.tailExponent = params.p / gh;
  d.a0 = epsTilde * std::pow(rhoTilde0, d.tailExponent);
  return d;
}

Lemma42Schedule lemma42_schedule(const DiffusionParams& params, const ReactionSpec& f, double sigma) {
  require_regime(params, Regime::FastGood, "lemma42_schedule");
  const double ss = sigma_star(params, f);
  if (!(sigma > 0.0 && sigma < ss)) throw ParameterError("lemma42_schedule requires 0 < sigma < sigma_star");
  const double gh = params.gammaHat();
  const double p = params.p;
  const double N = params.N;
  Lemma42Schedule s;
  s.sigma = sigma;
  for (int j = 1; j <= 60; ++j) {
    const double delta = std::ldexp(1.0, -j);
    const double lambda = f(delta) / delta;
    if (gh / p * lambda > sigma) {
      s.delta = delta;
      s.lambda = lambda;
      break;
    }
  }
  if (s.delta == 0.0) throw ScheduleError("no admissible dyadic delta: sigma is too close to sigma_star");

  const auto B1 = BarenblattFast::with_mass(params, 1.0);
  const auto pb = profile_bounds(B1);
  const double alpha = B1.alpha();
  const double e = (p - 1.0) / gh;
  s.K1 = pb.K1;
  s.K2 = pb.K2;
  s.C1 = B1.C();
  s.Kbar = std::pow(std::pow(s.C1, e) * std::pow(s.K1, -alpha * gh), N / (alpha * p));
  s.Ktilde = 0.5 * s.K2 * std::pow(s.C1, e);
  const double tA = std::log(std::pow(2.0, alpha) / s.Ktilde) / s.lambda;
  const double tB = std::log(2.0 * s.K1 / s.K2) / (s.lambda - p * sigma / gh);
  s.t0 = std::max({0.0, tA, tB});
  s.epsTilde0 = s.delta * std::exp(-s.lambda * s.t0);
  s.rhoTilde0Min = std::pow(std::pow(s.K1, gh) / (s.lambda * gh * std::pow(s.epsTilde0, gh)), 1.0 / p);
  s.M1 = s.Kbar * std::pow(s.rhoTilde0Min, N) * s.epsTilde0;
  s.theta1 = std::pow(s.K1, -gh) * std::pow(s.rhoTilde0Min, p) * std::pow(s.epsTilde0, gh);
  return s;
}

double PseudoBarenblattCritical::operator()(double r, double t) const {
  const int N = params.N;
  const double q = params.p / (params.p - 1.0);
  const double R = std::exp(t);
  return std::pow(R, -N) * std::pow(D + std::pow(std::abs(r) / R, q) / N, -(params.p - 1.0) * N / params.p);
}

AnalyticField PseudoBarenblattCritical::field() const {
  PseudoBarenblattCritical copy = *this;
  return {"pseudo_barenblatt", [copy](double r, double t) { return copy(r, t); }};
}

PseudoBarenblattCritical make_pseudo_barenblatt(const DiffusionParams& params, double D) {
  require_regime(params, Regime::Critical, "PseudoBarenblattCritical");
  if (!(D > 0.0)) throw ParameterError("pseudo-Barenblatt D must be positive");
  return PseudoBarenblattCritical{params, D};
}

double eval_pseudo_barenblatt(const PseudoBarenblattCritical& P, double r, double t) { return P(r, t); }

double TypeIIVeryFast::operator()(double r, double t) const {
  if (!(t < tc)) throw DomainError("Type II solution is extinct for t >= tc");
  const int N = params.N;
  const double gh = params.gammaHat();
  const double p = params.p;
  const double absAlpha = std::abs(1.0 / (p / N - gh));
  const double q = p / (p - 1.0);
  const double R = std::pow(N / absAlpha * (tc - t), -absAlpha / N);
  return std::pow(R, -N) * std::pow(D + gh / p * std::pow(std::abs(r) / R, q), -(p - 1.0) / gh);
}

AnalyticField TypeIIVeryFast::field() const {
  TypeIIVeryFast copy = *this;
  return {"type_ii", [copy](double r, double t) { return copy(r, t); }};
}

TypeIIVeryFast make_type_ii(const DiffusionParams& params, double D, double tc) {
  require_regime(params, Regime::VeryFast, "TypeIIVeryFast");
  if (!(D >= 0.0)) throw ParameterError("Type II D must be non-negative");
  if (!(tc > 0.0)) throw ParameterError("extinction time must be positive");
  return TypeIIVeryFast{params, D, tc};
}

double eval_typeII(const TypeIIVeryFast& T, double r, double t) { return T(r, t); }

double critical_tail_coefficient(const DiffusionParams& params) {
  require_regime(params, Regime::Critical, "critical tail");
  const double p = params.p;
  const double N = params.N;
  if (!(N > p)) throw ParameterError("critical tail requires N > p");
  return std::pow(params.m, p - 1.0) * (N - p) * std::pow(N, p - 2.0);
}

double eval_critical_tail(const DiffusionParams& params, double t, double r) {
  const double apn = critical_tail_coefficient(params);
  if (!(r > 1.0)) throw DomainError("critical tail requires r > 1");
  if (!(t > 0.0)) throw DomainError("critical tail requires t > 0");
  const double p = params.p;
  return std::pow(apn * t / (std::pow(r, p) * std::log(r)), params.N / p);
}

}  // namespace fkpp
