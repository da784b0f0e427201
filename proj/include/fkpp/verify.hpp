#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fkpp/analytic_solutions.hpp"
#include "fkpp/model_params.hpp"
#include "fkpp/pde_solver.hpp"

namespace fkpp {

// Coefficients of a w_t - Delta_p w + c w = 0 with w = 1 - u^m on the inner set, where eps <= u <= 1.
struct WProblemSetup {
  double epsTilde = 0.0;
  double a0 = 0.0;
  double a1 = 0.0;
  double c0 = 0.0;
  double nu = 0.0;
  double lambda = 0.0;
  double sigma = 0.0;
  double a1Raw = 0.0;  // before the c0/a1 = nu*lambda normalization
  double c0Raw = 0.0;
};

// lambda = p/(p-1), for which the p-Laplacian flow of |x|^lambda is |x|^lambda + N lambda^{p-1} t exactly.
// sigma defaults to sigma*/2 and nu to the midpoint of sigma and sigma*.
WProblemSetup w_coefficients(const DiffusionParams& params, double epsTilde, const ReactionSpec& f,
                             std::optional<double> sigma = std::nullopt, std::optional<double> nu = std::nullopt);

// Time change for the super-solution: tau(t1) = 0, d tau/dt = e^{(c0/a1)(2-p)(t-t1)} / a1.
double w_tau(const WProblemSetup& s, double p, double sinceT1);

// e^{-(c0/a1)(t-t1)} [1 + |x|^lambda + N lambda^{p-1} (tau(t) + tau1)] with tau1 = 1/c0, so d_t w <= 0.
AnalyticField w_super_solution(const DiffusionParams& params, const WProblemSetup& s, double t1);

// min over t >= t1 of (c0/a1)(tau + tau1) - tau', sampled on the given times.
double w_q_min(const WProblemSetup& s, double p, double t1, const std::vector<double>& times);

enum class RegionKind { FullDomain, InnerSet };

// InnerSet: {r <= e^{sigma t}, t >= t0}.
struct Region {
  RegionKind kind = RegionKind::FullDomain;
  double sigma = 0.0;
  double t0 = 0.0;

  static Region full() { return {}; }
  static Region inner(double sigma, double t0) { return {RegionKind::InnerSet, sigma, t0}; }
  bool contains(double r, double t) const;
};

const char* to_string(RegionKind kind);

enum class OrderingStatus { Pass, ComparisonFailure, PreconditionFailure };

const char* to_string(OrderingStatus status);

struct Locus {
  double r = 0.0;
  double t = 0.0;
};

struct OrderingReport {
  Region region;
  double tol = 0.0;
  double worstViolation = 0.0;
  std::optional<Locus> violationLocus;
  double initialViolation = 0.0;   // ordering at the first lattice time
  double boundaryViolation = 0.0;  // ordering on the outermost lattice radius at each time
  std::size_t latticePoints = 0;
  bool pass = false;
  OrderingStatus status = OrderingStatus::Pass;
};

// An analytic field or solver snapshots sampled at cell centers.
using OrderingSide = std::variant<AnalyticField, const RunResult*>;

// Max of (lower - upper)_+ over snapshot times x cell centers inside the region. Times default to the
// snapshot times of the run sides; an explicit list is needed when both sides are fields.
OrderingReport check_ordering(const OrderingSide& lower, const OrderingSide& upper, const RadialGrid& grid,
                              const Region& region, double tol, std::vector<double> times = {});

// Copy of the snapshots with u replaced by g(u, r, t).
RunResult map_snapshots(const RunResult& in, const RadialGrid& grid,
                        const std::function<double(double u, double r, double t)>& g);

struct AuditRunOptions {
  double tEnd = 1.0;
  std::size_t snapshots = 40;
  double epsReg = 1e-8;
  double cflSafety = 0.4;
};

// Full solver run from the datum against the Bernoulli super-solution with G(0) = 2 a0 on the full domain.
struct BernoulliAudit {
  BernoulliSuper super;
  OrderingReport report;
};

BernoulliAudit audit_bernoulli_super(const DiffusionParams& params, const ReactionSpec& f,
                                     const PlateauTailDatum& datum, const RadialGrid& grid,
                                     const AuditRunOptions& opt, double tol);

// Linearized run w (rate lambda) from the plateau-tail datum, with wt = e^{-lambda t} w at
// tau(t) = (1 - e^{-lambda gh t})/(lambda gh): B_M1(theta1 + tau) <= wt <= epsTilde.
struct BarenblattBelowAudit {
  double M1 = 0.0;
  double theta1 = 0.0;
  OrderingReport lowerReport;  // Barenblatt below wt
  OrderingReport upperReport;  // wt below epsTilde
  bool pass = false;
};

BarenblattBelowAudit audit_barenblatt_below_linearized(const DiffusionParams& params, double lambda,
                                                       const PlateauTailDatum& datum, const RadialGrid& grid,
                                                       const AuditRunOptions& opt, double tol);

// 1 - u^m from a full run against the w super-solution on {r <= e^{nu t}, t >= t1}; epsTilde is the
// measured minimum of u on that set.
struct WPairAudit {
  WProblemSetup setup;
  double t1 = 0.0;
  double qMin = 0.0;
  OrderingReport report;
};

WPairAudit audit_w_pair(const DiffusionParams& params, const ReactionSpec& f, const PlateauTailDatum& datum,
                        const RadialGrid& grid, double sigma, double t1, const AuditRunOptions& opt, double tol);

struct TrackingHistory {
  std::vector<double> times;
  std::vector<double> errors;  // relative L1
  bool boundaryAlarm = false;
};

// Solver started from B_M(., t0Init) compared with B_M(., t0Init + t).
TrackingHistory check_selfsimilar_tracking(const DiffusionParams& params, double M, double t0Init, double horizon,
                                           const RadialGrid& grid, std::size_t snapshots = 20);

struct TimeChangeReport {
  std::vector<double> times;
  std::vector<double> gaps;  // sup-norm gap relative to the sup norm of u
  double discrepancy = 0.0;
};

// Linearized run u(t) against e^{f'(0) t} v(tau(t)) with v a pure-diffusion run.
TimeChangeReport check_time_change_equivalence(const DiffusionParams& params, double fPrime0,
                                               const std::function<double(double)>& datum, double horizon,
                                               const RadialGrid& grid, std::size_t snapshots = 10,
                                               double epsReg = 1e-8);

struct MonotonicityReport {
  double worstSlope = 0.0;  // max over snapshots of the largest u[i+1] - u[i]
  std::optional<Locus> locus;
};

MonotonicityReport check_radial_monotonicity(const RunResult& result, const RadialGrid& grid);

struct Lemma42Iteration {
  Lemma42Schedule schedule;
  std::vector<double> times;    // j t0 for j = 0..jMax
  std::vector<double> margins;  // min over r <= rho0 e^{sigma j t0} of u - epsTilde0
  bool pass = false;
};

struct Lemma42GridOptions {
  int cells = 3000;
  double epsReg = 1e-8;
};

Lemma42Iteration check_lemma42_iteration(const DiffusionParams& params, const ReactionSpec& f, double sigma,
                                         int jMax, const Lemma42GridOptions& opt = {});

}  // namespace fkpp
