#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fkpp/model_params.hpp"

namespace fkpp {

// A radial space-time field u(r, t) with r = |x|.
struct AnalyticField {
  std::string name;
  std::function<double(double r, double t)> eval;

  double operator()(double r, double t) const { return eval(r, t); }
};

// Source-type solution of the pure diffusion problem in the FastGood range.
//   mass form: B(x,t) = t^-alpha F(|x| t^-alpha/N),  F(xi) = [C + k xi^{p/(p-1)}]^{-(p-1)/gh}
//   D form:    B(x,t) = R^-N [D + (gh/p)|x/R|^{p/(p-1)}]^{-(p-1)/gh},  R = ((N/alpha) t)^{alpha/N}
class BarenblattFast {
 public:
  enum class Formulation { MassForm, DForm };

  static BarenblattFast with_mass(const DiffusionParams& params, double M);
  static BarenblattFast with_D(const DiffusionParams& params, double D);
  // Mass form with a known constant; mass is recomputed by quadrature.
  static BarenblattFast with_C(const DiffusionParams& params, double C);

  // Solution of d_t u = Delta_p(u^m): the tabulated formula read at time m^{p-1} t.
  double operator()(double r, double t) const;
  // Tabulated formula, which solves the equation with the factor m^{p-1} absorbed into time.
  double absorbed(double r, double s) const;
  double profile(double xi) const;
  // m^{p-1}: converts solver time to the time of the tabulated formula.
  double time_scale() const;

  Formulation formulation() const { return form_; }
  const DiffusionParams& params() const { return params_; }
  double mass() const { return mass_; }
  double C() const { return C_; }
  double D() const { return D_; }
  double alpha() const { return alpha_; }
  double k() const { return k_; }

  AnalyticField field() const;

 private:
  BarenblattFast() = default;
  void init_constants(const DiffusionParams& params);

  DiffusionParams params_;
  Formulation form_ = Formulation::MassForm;
  double mass_ = 0.0;
  double C_ = 0.0;
  double D_ = 0.0;
  double alpha_ = 0.0;
  double k_ = 0.0;
  double q_ = 0.0;  // p/(p-1)
  double e_ = 0.0;  // (p-1)/gh
};

double eval_barenblatt(const BarenblattFast& B, double r, double t);

// Mass of the mass-form profile with constant C, by adaptive quadrature.
double barenblatt_mass_of_C(const DiffusionParams& params, double C);
// C_M such that the profile has mass M (relative residual well below 1e-8).
double normalize_mass(const DiffusionParams& params, double M);
// D-form constant equivalent to the mass-form constant C.
double barenblatt_D_from_C(const DiffusionParams& params, double C);

struct ProfileBounds {
  double K1 = 0.0;
  double K2 = 0.0;
  double xiAtK2 = 0.0;
};

ProfileBounds profile_bounds(const BarenblattFast& B);

struct BernoulliSuper {
  DiffusionParams params;
  double a = 0.0;
  // Linear growth rate of the reaction; 1 matches f'(0) = 1.
  double rate = 1.0;

  double G(double t) const;
  double operator()(double r, double t) const;
  AnalyticField field() const;
};

BernoulliSuper make_bernoulli_super(const DiffusionParams& params, double a, double rate = 1.0);
double eval_bernoulli_super(const BernoulliSuper& S, double r, double t);

struct KMSimilarity {
  DiffusionParams params;
  double aHat = 1.0;

  double operator()(double r, double t) const;
  // Radius where the profile equals omega.
  double level_radius(double omega, double t) const;
  AnalyticField field() const;
};

KMSimilarity make_km_similarity(const DiffusionParams& params, double aHat);
double eval_km_profile(const KMSimilarity& K, double r, double t);

struct BarrierSub {
  DiffusionParams params;
  double b = 1.0;
  double c = 2.0;
  double r0 = 1.0;
  double t0 = 0.0;

  double operator()(double r, double t) const;
  AnalyticField field() const;
};

BarrierSub make_barrier_sub(const DiffusionParams& params, double b, double c, double r0, double t0);
double eval_barrier_sub(const BarrierSub& B, double r, double t);

struct FeasibilityReport {
  bool ok = false;
  int branch = 1;  // 1: gh <= p-1, 2: gh > p-1
  double eps = 0.0;
  double b = 1.0;
  double c = 0.0;
  DConstants d;
  double r0 = 0.0;
  double r0Min = 0.0;
  double r0pBound1 = 0.0;            // first displayed bound on r0^p
  double r0pBound2 = 0.0;            // second displayed bound on r0^p
  double r0pBound2Compatible = 0.0;  // compatibility bound re-derived for branch 2
  double xi0 = 0.0;
  bool compatible = false;           // c <= (d1/d2) b / xi0
  bool certificate = false;
  std::size_t gridPoints = 0;
  double worstXi = 0.0;
  double worstValue = 0.0;           // min of C_r0 over the grid
  bool smallXiPositive = false;      // C_r0 -> b d1 > 0
  bool largeXiPositive = false;      // leading xi^p coefficient > 0
};

// C_r0(xi) of the barrier sign condition.
double barrier_sign_function(const DiffusionParams& params, double b, double c, double r0, double xi);

// Throws FeasibilityError when the grid certificate fails.
FeasibilityReport barrier_feasibility(const DiffusionParams& params, double eps,
                                      std::optional<double> r0Candidate = std::nullopt,
                                      std::size_t gridPoints = 100000);

struct PlateauTailDatum {
  double epsTilde = 0.0;
  double rhoTilde0 = 0.0;
  double a0 = 0.0;
  double tailExponent = 0.0;  // p/gh

  double operator()(double r) const;
};

PlateauTailDatum make_plateau_tail(double epsTilde, double rhoTilde0, const DiffusionParams& params);

struct Lemma42Schedule {
  double sigma = 0.0;
  double delta = 0.0;
  double lambda = 0.0;
  double t0 = 0.0;
  double epsTilde0 = 0.0;
  double rhoTilde0Min = 0.0;
  double M1 = 0.0;
  double theta1 = 0.0;
  double Kbar = 0.0;
  double Ktilde = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double C1 = 0.0;
};

Lemma42Schedule lemma42_schedule(const DiffusionParams& params, const ReactionSpec& f, double sigma);

// Eternal solution at gh = p/N with R(t) = e^t.
struct PseudoBarenblattCritical {
  DiffusionParams params;
  double D = 1.0;

  double operator()(double r, double t) const;
  AnalyticField field() const;
};

PseudoBarenblattCritical make_pseudo_barenblatt(const DiffusionParams& params, double D);
double eval_pseudo_barenblatt(const PseudoBarenblattCritical& P, double r, double t);

// Extinguishing solution for gh > p/N, defined for t < tc.
struct TypeIIVeryFast {
  DiffusionParams params;
  double D = 1.0;
  double tc = 1.0;

  double operator()(double r, double t) const;
  AnalyticField field() const;
};

TypeIIVeryFast make_type_ii(const DiffusionParams& params, double D, double tc);
double eval_typeII(const TypeIIVeryFast& T, double r, double t);

// (a^{p/N} t / (r^p ln r))^{N/p} with a^{p/N} = m^{p-1}(N-p)N^{p-2}.
double eval_critical_tail(const DiffusionParams& params, double t, double r);
double critical_tail_coefficient(const DiffusionParams& params);

}  // namespace fkpp
