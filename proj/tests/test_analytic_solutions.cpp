#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fkpp/analytic_solutions.hpp"
#include "fkpp/errors.hpp"

using namespace fkpp;

namespace {

const DiffusionParams kHalf{0.5, 2.0, 1};
const DiffusionParams kSingular{0.8, 1.5, 2};

// Closed-form profile mass: w_N C^{-e} (C/k)^{N/q} B(N/q, e - N/q) / q.
double beta_mass(const DiffusionParams& prm, double C) {
  const auto bc = barenblatt_constants(prm);
  const double q = prm.p / (prm.p - 1), e = (prm.p - 1) / prm.gammaHat();
  const double a = prm.N / q, b = e - a;
  const double B = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  return sphere_area(prm.N) * std::pow(C, -e) * std::pow(C / bc.k, a) * B / q;
}

DiffusionParams random_fast_good(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> up(1.2, 3.5);
  std::uniform_int_distribution<int> un(1, 3);
  std::uniform_real_distribution<double> frac(0.15, 0.85);
  for (;;) {
    const double p = up(rng);
    const int N = un(rng);
    const double gh = frac(rng) * std::min(p / N, 1.0);
    DiffusionParams prm{(1 - gh) / (p - 1), p, N};
    if (classify(prm) == Regime::FastGood) return prm;
  }
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxy / sxx;
}

// 4th-order central difference
template <class F>
double d1(F f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// du/dt - r^{1-N} d/dr (r^{N-1} |d/dr u^m|^{p-2} d/dr u^m), terms returned separately
struct OperatorTerms {
  double dudt;
  double diffusion;
};

template <class U>
OperatorTerms operator_terms(U u, const DiffusionParams& prm, double r, double t) {
  const double h = 1e-3 * r;
  auto flux = [&](double rr) {
    auto w = [&](double x) { return std::pow(u(x, t), prm.m); };
    const double g = d1(w, rr, 1e-3 * rr);
    return std::pow(rr, prm.N - 1) * std::pow(std::abs(g), prm.p - 2) * g;
  };
  const double div = d1(flux, r, h) / std::pow(r, prm.N - 1);
  const double dt = 1e-3 * std::max(1.0, t);
  const double dudt = d1([&](double s) { return u(r, s); }, t, dt);
  return {dudt, div};
}

}  // namespace

TEST(NormalizeMass, MatchesBetaFunctionOracle) {
  for (const auto& prm : {kHalf, kSingular, DiffusionParams{0.3, 2.5, 3}, DiffusionParams{0.4, 2.5, 1}}) {
    ASSERT_EQ(classify(prm), Regime::FastGood);
    for (double C : {0.3, 1.0, 4.0}) {
      EXPECT_NEAR(barenblatt_mass_of_C(prm, C) / beta_mass(prm, C), 1.0, 1e-10);
    }
    const double C1 = normalize_mass(prm, 1.0);
    EXPECT_NEAR(beta_mass(prm, C1), 1.0, 1e-9);
  }
}

TEST(NormalizeMass, DoublingMassFollowsRescaling) {
  // B_M = M B_1(x, M^{-gh} t) forces C_M = C_1 M^{-alpha p gh / (N (p-1))}
  for (const auto& prm : {kHalf, kSingular}) {
    const auto bc = barenblatt_constants(prm);
    const double C1 = normalize_mass(prm, 1.0);
    const double C2 = normalize_mass(prm, 2.0);
    const double expo = -bc.alpha * prm.p * prm.gammaHat() / (prm.N * (prm.p - 1));
    EXPECT_NEAR(C2 / (C1 * std::pow(2.0, expo)), 1.0, 1e-11);
  }
}

TEST(NormalizeMass, MassIsTimeInvariant) {
  const auto B = BarenblattFast::with_mass(kHalf, 1.0);
  for (double t : {0.5, 1.0, 2.0}) {
    // trapezoid on r = e^s, s in [-20, 25], doubled for the full line
    const int n = 200000;
    const double a = -20, b = 25, h = (b - a) / n;
    double s = 0;
    for (int i = 0; i <= n; ++i) {
      const double r = std::exp(a + h * i);
      s += (i == 0 || i == n ? 0.5 : 1.0) * B(r, t) * r;
    }
    EXPECT_NEAR(2 * s * h, 1.0, 1e-6) << "t=" << t;
  }
}

TEST(Barenblatt, CenterValueAndDomainError) {
  const auto B = BarenblattFast::with_mass(kHalf, 1.0);
  const auto bc = barenblatt_constants(kHalf);
  for (double t : {0.3, 1.0, 7.0}) {
    EXPECT_NEAR(B.absorbed(0.0, t), std::pow(t, -bc.alpha) * std::pow(B.C(), -(kHalf.p - 1) / kHalf.gammaHat()), 1e-14);
    EXPECT_DOUBLE_EQ(B(0.0, t), B.absorbed(0.0, std::pow(kHalf.m, kHalf.p - 1) * t));
  }
  EXPECT_THROW(B(1.0, 0.0), DomainError);
  EXPECT_THROW(B(1.0, -1.0), DomainError);
}

TEST(Barenblatt, SolvesUnabsorbedEquation) {
  for (const auto& prm : {kHalf, kSingular, DiffusionParams{0.4, 2.5, 3}, DiffusionParams{1.5, 1.5, 1}}) {
    ASSERT_EQ(classify(prm), Regime::FastGood);
    const auto B = BarenblattFast::with_mass(prm, 1.3);
    for (double t : {0.5, 2.0}) {
      for (double r : {0.3, 1.0, 4.0, 20.0}) {
        const auto terms = operator_terms([&](double x, double s) { return B(x, s); }, prm, r, t);
        // finite differences limit accuracy near the singular centre for p < 2
        EXPECT_LE(std::abs(terms.dudt - terms.diffusion) / std::abs(terms.dudt), 1e-4)
            << prm.m << " " << prm.p << " r=" << r << " t=" << t;
      }
    }
  }
}

TEST(Barenblatt, MassAndDFormsAgree) {
  for (const auto& prm : {kHalf, kSingular}) {
    const auto Bm = BarenblattFast::with_mass(prm, 1.7);
    const auto Bd = BarenblattFast::with_D(prm, Bm.D());
    EXPECT_NEAR(Bd.mass() / 1.7, 1.0, 1e-9);
    for (double r : {0.0, 0.1, 1.0, 3.0, 50.0}) {
      for (double t : {0.2, 1.0, 5.0}) EXPECT_NEAR(Bd(r, t) / Bm(r, t), 1.0, 1e-12);
    }
  }
}

TEST(Barenblatt, RescalingIdentity) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uM(0.05, 20), ux(-30, 30), ut(0.05, 10);
  for (const auto& prm : {kHalf, kSingular}) {
    const auto B1 = BarenblattFast::with_mass(prm, 1.0);
    for (int i = 0; i < 200; ++i) {
      const double M = uM(rng), x = ux(rng), t = ut(rng);
      const auto BM = BarenblattFast::with_mass(prm, M);
      const double lhs = BM(x, t);
      const double rhs = M * B1(x, std::pow(M, -prm.gammaHat()) * t);
      EXPECT_LE(std::abs(lhs - rhs) / lhs, 1e-10) << "M=" << M << " x=" << x << " t=" << t;
    }
  }
}

TEST(Barenblatt, TailSlope) {
  const auto B = BarenblattFast::with_mass(kHalf, 1.0);
  std::vector<double> x, y;
  for (int i = 0; i <= 200; ++i) {
    const double r = std::pow(10.0, 2.0 + 2.0 * i / 200);
    x.push_back(std::log(r));
    y.push_back(std::log(B(r, 1.0)));
  }
  EXPECT_NEAR(slope_fit(x, y), -4.0, 0.01);
}

TEST(ProfileBounds, HalfCaseValues) {
  const auto B = BarenblattFast::with_mass(kHalf, 1.0);
  const auto pb = profile_bounds(B);
  EXPECT_NEAR(pb.K1, 36.0, 1e-12);
  // brute-force oracle: dense scan of F(xi)(1 + xi^4)
  double best = B.profile(0.0);
  for (int i = 0; i <= 2000000; ++i) {
    const double xi = 5.0 * i / 2000000;
    best = std::min(best, B.profile(xi) * (1 + std::pow(xi, 4)));
  }
  EXPECT_NEAR(pb.K2, best, 1e-10);
  EXPECT_LT(pb.K2, pb.K1);
}

TEST(ProfileBounds, SandwichOnLogGrid) {
  std::mt19937_64 rng(17);
  std::vector<DiffusionParams> cases{kHalf, kSingular};
  for (int i = 0; i < 8; ++i) cases.push_back(random_fast_good(rng));
  for (const auto& prm : cases) {
    const auto B = BarenblattFast::with_mass(prm, 1.0);
    const auto pb = profile_bounds(B);
    const double s = prm.p / prm.gammaHat();
    EXPECT_LT(pb.K2, pb.K1);
    for (int i = 0; i < 10000; ++i) {
      const double xi = std::pow(10.0, -6.0 + 12.0 * i / 9999);
      const double F = B.profile(xi);
      EXPECT_LE(pb.K2 / (1 + std::pow(xi, s)), F * (1 + 1e-12));
      EXPECT_LE(F, pb.K1 * std::pow(xi, -s) * (1 + 1e-12));
    }
  }
}

TEST(Bernoulli, HandValues) {
  auto S = make_bernoulli_super(kHalf, 7.0);
  EXPECT_NEAR(S(1.0, 0.0), 1.0, 1e-14);
  EXPECT_NEAR(S.G(0.0), 1.0, 1e-14);
  auto S0 = make_bernoulli_super(kHalf, kappa(kHalf));
  EXPECT_EQ(S0(2.0, 0.0), 0.0);
  EXPECT_NEAR(S0.G(1.3), std::pow(6.0, 2) * std::pow(std::exp(0.65) - 1, 2), 1e-10);
  EXPECT_THROW(S(0.0, 1.0), DomainError);
  EXPECT_THROW(make_bernoulli_super(kHalf, 5.0), ParameterError);
}

TEST(Bernoulli, LevelCurveSlope) {
  auto S = make_bernoulli_super(kHalf, 7.0);
  const double omega = 0.5;
  std::vector<double> t, lr;
  for (int i = 0; i <= 100; ++i) {
    const double tt = 20 + 20.0 * i / 100;
    t.push_back(tt);
    lr.push_back(kHalf.gammaHat() / kHalf.p * std::log(S.G(tt) / omega));
  }
  EXPECT_NEAR(slope_fit(t, lr), 0.25, 1e-3);
}

TEST(Bernoulli, SolvesLinearizedEquation) {
  for (const auto& prm : {kHalf, kSingular, DiffusionParams{0.4, 2.5, 3}}) {
    ASSERT_EQ(classify(prm), Regime::FastGood);
    for (double rate : {1.0, 0.6}) {
      const double a = 1.5 * kappa(prm) / rate + 1.0;
      auto S = make_bernoulli_super(prm, a, rate);
      for (double r : {0.5, 1.0, 4.0, 30.0}) {
        for (double t : {0.3, 1.0, 3.0}) {
          const auto terms = operator_terms([&](double x, double s) { return S(x, s); }, prm, r, t);
          const double res = terms.dudt - terms.diffusion - rate * S(r, t);
          const double scale = std::abs(terms.dudt) + std::abs(terms.diffusion) + std::abs(rate * S(r, t));
          EXPECT_LE(std::abs(res) / scale, 1e-6) << "r=" << r << " t=" << t;
        }
      }
    }
  }
}

TEST(KMProfile, HandValuesAndMonotone) {
  auto K = make_km_similarity(kHalf, 1.0);
  EXPECT_EQ(K(0.0, 3.0), 1.0);
  EXPECT_DOUBLE_EQ(K(1.0, 0.0), 0.5);
  EXPECT_NEAR(K.level_radius(0.5, 0.0), 1.0, 1e-15);
  for (double t : {0.0, 2.0, 10.0}) {
    double prev = K(0.0, t);
    for (int i = 1; i < 2000; ++i) {
      const double v = K(0.01 * i, t);
      EXPECT_LE(v - prev, 0.0);
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, 1.0);
      prev = v;
    }
  }
}

TEST(BarrierSub, HandValuesAndMonotone) {
  const double eps = 0.1;
  auto B = make_barrier_sub(kHalf, 2.0, 1.0 / (1 - eps), 5.0, 0.0);
  EXPECT_NEAR(B(0.0, 3.0), 1 - eps, 1e-15);
  EXPECT_NEAR(B(0.0, 0.0), 1.0 / B.c, 1e-15);
  for (double t : {0.0, 1.0, 5.0, 12.0}) {
    const double r = std::exp(kHalf.gammaHat() * t / kHalf.p);
    EXPECT_NEAR(B(r, t), 1.0 / (B.b + B.c), 1e-14);
    double prev = B(0.0, t);
    for (int i = 1; i < 2000; ++i) {
      const double v = B(0.05 * i, t);
      EXPECT_LE(v - prev, 0.0);
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, 1.0 / B.c);
      prev = v;
    }
  }
  EXPECT_THROW(eval_barrier_sub(make_barrier_sub(kHalf, 1, 2, 1, 1.0), 1.0, 0.5), DomainError);
  EXPECT_THROW(make_barrier_sub(kHalf, 1, 1.0, 1, 0), ParameterError);
}

TEST(BarrierFeasibility, HandBound) {
  const auto rep = barrier_feasibility(kHalf, 0.1);
  EXPECT_EQ(rep.branch, 1);
  EXPECT_NEAR(rep.r0pBound1, 12.0 * 10 / (3 * std::sqrt(0.9)), 1e-9);
  EXPECT_NEAR(std::sqrt(rep.r0pBound1), 6.49, 5e-3);
  EXPECT_GE(rep.r0Min, std::sqrt(rep.r0pBound1));
  EXPECT_TRUE(rep.ok);
  EXPECT_TRUE(rep.certificate);
  EXPECT_TRUE(rep.compatible);
  EXPECT_NEAR(rep.c, 1 / 0.9, 1e-15);
}

TEST(BarrierFeasibility, CertificateAtTwiceAndHundredthOfMinimal) {
  for (const auto& prm : {kHalf, kSingular, DiffusionParams{0.3, 1.5, 1}}) {
    const auto base = barrier_feasibility(prm, 0.1);
    const auto twice = barrier_feasibility(prm, 0.1, 2 * base.r0Min);
    EXPECT_TRUE(twice.certificate);
    EXPECT_GE(twice.worstValue, 0.0);
    EXPECT_THROW(barrier_feasibility(prm, 0.1, 0.01 * base.r0Min), FeasibilityError);
  }
}

TEST(BarrierFeasibility, FullInequalityHoldsForAllRadiiBeyondR0) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 6; ++k) {
    const auto prm = random_fast_good(rng);
    const auto rep = barrier_feasibility(prm, 0.1, std::nullopt, 2000);
    for (double scale : {1.0, 1.5, 10.0}) {
      for (int i = 0; i < 2000; ++i) {
        const double xi = std::pow(10.0, -8.0 + 16.0 * i / 1999);
        EXPECT_GE(barrier_sign_function(prm, 1.0, rep.c, scale * rep.r0, xi), 0.0);
      }
    }
  }
}

// Plugging the barrier into the full logistic equation gives a non-positive residual for r >= r0.
TEST(BarrierFeasibility, BarrierIsSubSolutionBeyondR0) {
  std::vector<DiffusionParams> cases{kHalf, kSingular, DiffusionParams{0.3, 1.5, 1}, DiffusionParams{0.2, 2.0, 2}};
  for (const auto& prm : cases) {
    ASSERT_EQ(classify(prm), Regime::FastGood);
    const auto rep = barrier_feasibility(prm, 0.1);
    for (double b : {1.0, 50.0}) {
      auto B = make_barrier_sub(prm, b, rep.c, rep.r0, 0.0);
      for (double rs : {1.0, 1.3, 3.0, 20.0}) {
        for (double t : {0.5, 3.0, 8.0, 15.0}) {
          const double r = rs * rep.r0;
          const auto terms = operator_terms([&](double x, double s) { return B(x, s); }, prm, r, t);
          const double u = B(r, t);
          const double res = terms.dudt - terms.diffusion - u * (1 - u);
          const double scale = std::abs(terms.dudt) + std::abs(terms.diffusion) + u * (1 - u);
          EXPECT_LE(res, 1e-7 * scale) << "m=" << prm.m << " p=" << prm.p << " r=" << r << " t=" << t;
        }
      }
    }
  }
}

TEST(PlateauTail, Values) {
  const auto d = make_plateau_tail(0.1, 2.0, kHalf);
  EXPECT_NEAR(d.a0, 1.6, 1e-14);
  EXPECT_EQ(d(2.0), 0.1);
  EXPECT_NEAR(d.a0 * std::pow(2.0, -4.0), 0.1, 1e-15);
  for (int i = 0; i < 1000; ++i) EXPECT_LE(d(0.01 * i * i), 0.1);
  EXPECT_THROW(make_plateau_tail(1.5, 2.0, kHalf), ParameterError);
}

TEST(Lemma42, HandValuesAndInvariants) {
  const auto s = lemma42_schedule(kHalf, logistic(), 0.1);
  EXPECT_EQ(s.delta, 0.5);
  EXPECT_EQ(s.lambda, 0.5);
  const double gh = kHalf.gammaHat(), p = kHalf.p;
  const double alpha = barenblatt_constants(kHalf).alpha;
  EXPECT_GT(gh / p * s.lambda, 0.1);
  EXPECT_GE(s.Ktilde * std::exp(s.lambda * s.t0), std::pow(2.0, alpha) * (1 - 1e-12));
  EXPECT_GE(s.K2 / (2 * s.K1) * std::exp(s.lambda * s.t0), std::exp(p / gh * 0.1 * s.t0) * (1 - 1e-12));
  EXPECT_GE(std::pow(s.rhoTilde0Min, p), std::pow(s.K1, gh) / (s.lambda * gh * std::pow(s.epsTilde0, gh)) * (1 - 1e-12));
  // t0 is the smallest admissible time: one condition is tight
  const double slackA = s.Ktilde * std::exp(s.lambda * s.t0) / std::pow(2.0, alpha);
  const double slackB = s.K2 / (2 * s.K1) * std::exp(s.lambda * s.t0) / std::exp(p / gh * 0.1 * s.t0);
  EXPECT_NEAR(std::min(slackA, slackB), 1.0, 1e-10);
}

TEST(Lemma42, BarenblattFitsUnderPlateauTailDatum) {
  for (double sigma : {0.05, 0.1, 0.2}) {
    const auto s = lemma42_schedule(kHalf, logistic(), sigma);
    const auto B = BarenblattFast::with_mass(kHalf, s.M1);
    // theta1 is measured in the time of the tabulated formula
    EXPECT_NEAR(B.absorbed(0.0, s.theta1) / s.epsTilde0, 1.0, 1e-9);
    const auto datum = make_plateau_tail(s.epsTilde0, s.rhoTilde0Min, kHalf);
    for (int i = 0; i < 4000; ++i) {
      const double r = s.rhoTilde0Min * std::pow(10.0, -3.0 + 8.0 * i / 3999);
      EXPECT_LE(B.absorbed(r, s.theta1), datum(r) * (1 + 1e-9)) << "r=" << r;
    }
  }
}

TEST(Lemma42, LogisticSmallSigmaUsesHalf) {
  EXPECT_EQ(lemma42_schedule(kHalf, logistic(), 1e-6).delta, 0.5);
  EXPECT_EQ(lemma42_schedule(kSingular, logistic(), 1e-6).delta, 0.5);
}

TEST(Lemma42, T0MonotoneWhileDeltaIsFixed) {
  // With delta fixed, t0 is non-decreasing in sigma. Across a change of delta it can drop:
  // sigma = 0.1 keeps delta = 1/2 (t0 ~ 61) while sigma = 0.125 forces delta = 1/4 (t0 ~ 24).
  double prevT0 = 0, prevDelta = -1;
  for (int i = 1; i < 240; ++i) {
    const double sigma = 0.25 * i / 240.0;
    const auto s = lemma42_schedule(kHalf, logistic(), sigma);
    if (s.delta == prevDelta) EXPECT_GE(s.t0, prevT0) << "sigma=" << sigma;
    prevT0 = s.t0;
    prevDelta = s.delta;
  }
  const auto a = lemma42_schedule(kHalf, logistic(), 0.1);
  const auto b = lemma42_schedule(kHalf, logistic(), 0.125);
  EXPECT_EQ(a.delta, 0.5);
  EXPECT_EQ(b.delta, 0.25);
  EXPECT_GT(a.t0, b.t0);
}

TEST(Lemma42, Errors) {
  EXPECT_THROW(lemma42_schedule(kHalf, logistic(), 0.3), ParameterError);
  EXPECT_THROW(lemma42_schedule(DiffusionParams{1.0 / 3, 2, 3}, logistic(), 0.1), RegimeError);
  EXPECT_THROW(lemma42_schedule(kHalf, logistic(), 0.25 * (1 - 1e-20)), ParameterError);
  // 0.25 (1 - 1e-17) rounds to sigma_star itself
  EXPECT_THROW(lemma42_schedule(kHalf, logistic(), 0.25 * (1 - 1e-17)), ParameterError);
  // f(d)/d = 1 - d^0.01 stays below 0.66 on every dyadic d >= 2^-60 while f'(0) = 1
  const auto slow = custom_reaction([](double u) { return u * (1 - std::pow(u, 0.01)); }, 1.0, -0.01);
  EXPECT_THROW(lemma42_schedule(kHalf, slow, 0.2), ScheduleError);
}

TEST(PseudoBarenblatt, TailSlopeAndEternal) {
  const DiffusionParams crit{1.0 / 3.0, 2.0, 3};
  auto P = make_pseudo_barenblatt(crit, 1.0);
  std::vector<double> x, y;
  for (int i = 0; i <= 200; ++i) {
    const double r = std::pow(10.0, 3.0 + 2.0 * i / 200);
    x.push_back(std::log(r));
    y.push_back(std::log(P(r, 1.0)));
  }
  EXPECT_NEAR(slope_fit(x, y), -3.0, 0.01);
  // prefactor N^{(p-1)N/p}
  EXPECT_NEAR(P(1e7, 0.0) * 1e21 / std::pow(3.0, 1.5), 1.0, 1e-6);
  EXPECT_TRUE(std::isfinite(P(1.0, -10.0)));
  EXPECT_GT(P(1.0, -10.0), 0.0);
  EXPECT_THROW(make_pseudo_barenblatt(kHalf, 1.0), RegimeError);
}

TEST(TypeII, VanishesAtExtinction) {
  const DiffusionParams vf{0.1, 2.0, 3};
  ASSERT_EQ(classify(vf), Regime::VeryFast);
  auto T = make_type_ii(vf, 1.0, 2.0);
  const double late = T(0.0, 2.0 - 1e-6), early = T(0.0, 2.0 - 1e-2);
  EXPECT_GT(late, 0);
  EXPECT_LT(late / early, 1.0);
  EXPECT_THROW(T(0.0, 2.0), DomainError);
  EXPECT_THROW(make_type_ii(kHalf, 1.0, 1.0), RegimeError);
}

TEST(CriticalTail, HandValues) {
  const DiffusionParams crit{1.0 / 3.0, 2.0, 3};
  EXPECT_NEAR(critical_tail_coefficient(crit), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(eval_critical_tail(crit, 3.0, std::exp(1.0)), std::exp(-3.0), 1e-12);
  double prev = eval_critical_tail(crit, 1.0, std::exp(0.5) * 1.0001);
  for (int i = 1; i < 1000; ++i) {
    const double r = std::exp(0.5) * (1.0001 + 0.05 * i);
    const double v = eval_critical_tail(crit, 1.0, r);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_THROW(eval_critical_tail(crit, 1.0, 1.0), DomainError);
  EXPECT_THROW(eval_critical_tail(crit, 1.0, 0.5), DomainError);
}
