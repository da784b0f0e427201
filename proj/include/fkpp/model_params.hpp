#pragma once

#include <functional>
#include <string>

namespace fkpp {

struct DiffusionParams {
  double m = 1.0;
  double p = 2.0;
  int N = 1;

  double gamma() const { return m * (p - 1.0) - 1.0; }
  double gammaHat() const { return -gamma(); }
};

// Throws ParameterError unless m > 0, p > 1, N >= 1.
DiffusionParams make_params(double m, double p, int N);
void validate(const DiffusionParams& params);

enum class Regime { SlowOrPseudoLinear, FastGood, Critical, VeryFast };

const char* to_string(Regime regime);

struct ExponentInfo {
  double gamma = 0.0;
  double gammaHat = 0.0;
  Regime regime = Regime::SlowOrPseudoLinear;
};

inline constexpr double kCriticalRelTol = 1e-12;

ExponentInfo derive_exponents(const DiffusionParams& params, double criticalRelTol = kCriticalRelTol);
Regime classify(const DiffusionParams& params, double criticalRelTol = kCriticalRelTol);

enum class ReactionKind { Logistic, Custom };

struct ReactionSpec {
  ReactionKind kind = ReactionKind::Logistic;
  double fPrime0 = 1.0;
  double fPrime1 = -1.0;
  std::function<double(double)> f;
  // Logistic rate; for custom reactions this is informational only.
  double rate = 1.0;

  double operator()(double u) const { return f(u); }
};

// f(u) = rate * u * (1 - u).
ReactionSpec logistic(double rate = 1.0);

// Validates f(0)=f(1)=0, positivity and discrete concavity on a 4097-point grid.
// fPrime0 and fPrime1 are estimated by one-sided differences when not supplied.
ReactionSpec custom_reaction(std::function<double(double)> f, double fPrime0 = 0.0, double fPrime1 = 0.0);
void validate(const ReactionSpec& reaction);

double sigma_star(const DiffusionParams& params, const ReactionSpec& f, double criticalRelTol = kCriticalRelTol);
double sigma_star(const DiffusionParams& params, double fPrime0, double criticalRelTol = kCriticalRelTol);

struct BarenblattConstants {
  double alpha = 0.0;
  double k = 0.0;
};

BarenblattConstants barenblatt_constants(const DiffusionParams& params);
double kappa(const DiffusionParams& params);

struct DConstants {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

DConstants d_constants(const DiffusionParams& params);

struct SelfSimilarExponents {
  double alphaLambda = 0.0;
  double betaLambda = 0.0;
};

SelfSimilarExponents self_similar_exponents(double lambda, double p);

// tau(t) = (1 - exp(-rate*gh*t)) / (rate*gh); rate = 0 gives the identity.
double time_change(double t, double rate, double gammaHat);
double inverse_time_change(double tau, double rate, double gammaHat);
double tau_infinity(double rate, double gammaHat);

struct ExponentBundle {
  double gamma = 0.0;
  double gammaHat = 0.0;
  double sigmaStar = 0.0;
  double alpha = 0.0;
  double k = 0.0;
  double kappa = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  double tauInfinity = 0.0;
};

// FastGood only.
ExponentBundle exponent_bundle(const DiffusionParams& params, const ReactionSpec& f);

// Surface measure of the unit sphere in R^N; 2 for N = 1.
double sphere_area(int N);

}  // namespace fkpp
