#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fkpp/errors.hpp"
#include "fkpp/model_params.hpp"

using namespace fkpp;

namespace {

// Random (m, p, N) strictly inside the fast range 0 < gh < p/N.
DiffusionParams random_fast_good(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> up(1.1, 4.0);
  std::uniform_int_distribution<int> un(1, 4);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  for (;;) {
    const double p = up(rng);
    const int N = un(rng);
    const double ghMax = std::min(p / N, 1.0);
    const double gh = frac(rng) * ghMax;
    const double m = (1.0 - gh) / (p - 1.0);
    DiffusionParams prm{m, p, N};
    if (classify(prm) == Regime::FastGood) return prm;
  }
}

}  // namespace

TEST(DeriveExponents, HandValues) {
  auto a = derive_exponents(make_params(0.5, 2, 1));
  EXPECT_DOUBLE_EQ(a.gamma, -0.5);
  EXPECT_DOUBLE_EQ(a.gammaHat, 0.5);
  EXPECT_EQ(a.regime, Regime::FastGood);

  auto b = derive_exponents(make_params(1, 2, 1));
  EXPECT_EQ(b.gamma, 0.0);
  EXPECT_EQ(b.regime, Regime::SlowOrPseudoLinear);

  auto c = derive_exponents(make_params(1.0 / 3.0, 2, 3));
  EXPECT_NEAR(c.gammaHat, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(c.regime, Regime::Critical);

  EXPECT_EQ(classify(make_params(0.1, 2, 3)), Regime::VeryFast);
}

TEST(DeriveExponents, GammaHatIsExactNegation) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> um(0.01, 5.0), up(1.001, 6.0);
  for (int i = 0; i < 1000; ++i) {
    DiffusionParams prm{um(rng), up(rng), 2};
    EXPECT_EQ(prm.gammaHat(), 1.0 - prm.m * (prm.p - 1.0));
    EXPECT_EQ(prm.gammaHat(), -prm.gamma());
  }
}

TEST(DeriveExponents, InvalidParameters) {
  EXPECT_THROW(make_params(-1, 2, 1), ParameterError);
  EXPECT_THROW(make_params(0, 2, 1), ParameterError);
  EXPECT_THROW(make_params(1, 1, 1), ParameterError);
  EXPECT_THROW(make_params(1, 2, 0), ParameterError);
  EXPECT_THROW(make_params(std::nan(""), 2, 1), ParameterError);
}

TEST(DeriveExponents, RegimesAreExhaustive) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> um(0.01, 3.0), up(1.01, 5.0);
  std::uniform_int_distribution<int> un(1, 5);
  for (int i = 0; i < 5000; ++i) {
    DiffusionParams prm{um(rng), up(rng), un(rng)};
    const double gh = prm.gammaHat(), pn = prm.p / prm.N;
    const Regime r = classify(prm);
    int hits = 0;
    hits += (gh <= 0) && r == Regime::SlowOrPseudoLinear;
    hits += (gh > 0 && gh < pn && std::abs(gh - pn) > 1e-12 * pn) && r == Regime::FastGood;
    hits += (gh > 0 && std::abs(gh - pn) <= 1e-12 * pn) && r == Regime::Critical;
    hits += (gh > pn && std::abs(gh - pn) > 1e-12 * pn) && r == Regime::VeryFast;
    EXPECT_EQ(hits, 1);
  }
}

TEST(SigmaStar, HandValues) {
  EXPECT_DOUBLE_EQ(sigma_star(make_params(0.5, 2, 1), logistic()), 0.25);
  EXPECT_NEAR(sigma_star(make_params(0.8, 1.5, 2), logistic()), 0.4, 1e-15);
  EXPECT_NEAR(sigma_star(make_params(1.0 / 3.0, 2, 3), logistic()), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(sigma_star(make_params(1, 2, 1), logistic()), RegimeError);
  EXPECT_THROW(sigma_star(make_params(2, 2, 1), logistic()), RegimeError);
}

TEST(BarenblattConstants, HandValues) {
  auto a = barenblatt_constants(make_params(0.5, 2, 1));
  EXPECT_NEAR(a.alpha, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(a.k, 1.0 / 6.0, 1e-15);
  auto b = barenblatt_constants(make_params(0.8, 1.5, 2));
  EXPECT_NEAR(b.alpha, 20.0 / 3.0, 1e-12);
  EXPECT_NEAR(b.k, 40.0 / 9.0, 1e-12);
  EXPECT_THROW(barenblatt_constants(make_params(1.0 / 3.0, 2, 3)), RegimeError);
  EXPECT_THROW(barenblatt_constants(make_params(0.1, 2, 3)), RegimeError);
}

TEST(BarenblattConstants, AlphaDivergesAtCriticalLine) {
  const double gh3 = 2.0 / 3.0 - 1e-9;
  auto c = barenblatt_constants(make_params(1.0 - gh3, 2, 3));
  EXPECT_GT(c.alpha, 1e8);
}

TEST(Kappa, HandValues) {
  EXPECT_NEAR(kappa(make_params(0.5, 2, 1)), 6.0, 1e-12);
  EXPECT_NEAR(kappa(make_params(0.8, 1.5, 2)), 0.7071, 1e-3);
  // independent: (1.5-1.2) 1.2^0.5 / 0.6^1.5
  EXPECT_NEAR(kappa(make_params(0.8, 1.5, 2)), 0.3 * std::sqrt(1.2) / std::pow(0.6, 1.5), 1e-12);
  const double gh3 = 2.0 / 3.0 - 1e-10;
  EXPECT_LT(kappa(make_params(1.0 - gh3, 2, 3)), 1e-8);
  EXPECT_THROW(kappa(make_params(1, 2, 1)), RegimeError);
}

TEST(DConstants, HandValues) {
  auto a = d_constants(make_params(0.5, 2, 1));
  EXPECT_NEAR(a.d1, 12.0, 1e-12);
  EXPECT_NEAR(a.d2, 12.0, 1e-12);
  EXPECT_NEAR(a.d3, 2.0, 1e-12);
  auto b = d_constants(make_params(0.8, 1.5, 2));
  EXPECT_NEAR(b.d1, 1.25, 1e-3);
  EXPECT_NEAR(b.d2, 4.375, 1e-3);
  EXPECT_NEAR(b.d3, 1.7678, 1e-3);
  const double gh3 = 2.0 / 3.0 - 1e-10;
  EXPECT_LT(d_constants(make_params(1.0 - gh3, 2, 3)).d1, 1e-8);
  EXPECT_THROW(d_constants(make_params(1, 2, 1)), RegimeError);
}

TEST(SelfSimilarExponents, HandValues) {
  auto a = self_similar_exponents(1, 2);
  EXPECT_DOUBLE_EQ(a.alphaLambda, -0.5);
  EXPECT_DOUBLE_EQ(a.betaLambda, 0.5);
  auto b = self_similar_exponents(2, 2);
  EXPECT_DOUBLE_EQ(b.alphaLambda, -1.0);
  EXPECT_DOUBLE_EQ(b.betaLambda, 0.5);
  auto c = self_similar_exponents(1, 3);
  EXPECT_DOUBLE_EQ(c.alphaLambda, -0.5);
  EXPECT_DOUBLE_EQ(c.betaLambda, 0.5);
  EXPECT_THROW(self_similar_exponents(3, 3), ParameterError);
  EXPECT_THROW(self_similar_exponents(0, 2), ParameterError);
  EXPECT_THROW(self_similar_exponents(1, 1), ParameterError);
}

TEST(TimeChange, HandValues) {
  EXPECT_EQ(time_change(0, 1, 0.5), 0.0);
  EXPECT_NEAR(time_change(2 * std::log(2.0), 1, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(time_change(200, 1, 0.5), 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(tau_infinity(1, 0.5), 2.0);
  EXPECT_EQ(time_change(3.5, 0, 0.5), 3.5);
  EXPECT_THROW(inverse_time_change(2.0, 1, 0.5), DomainError);
  EXPECT_THROW(inverse_time_change(2.5, 1, 0.5), DomainError);
  EXPECT_THROW(time_change(-1, 1, 0.5), DomainError);
}

TEST(TimeChange, MonotoneBoundedAndInvertible) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ut(0, 20), ur(0.1, 3), ug(0.05, 1);
  for (int i = 0; i < 10000; ++i) {
    const double rate = ur(rng), gh = ug(rng);
    const double t1 = ut(rng), t2 = t1 + ut(rng) * 0.1 + 1e-6;
    const double a = time_change(t1, rate, gh), b = time_change(t2, rate, gh);
    EXPECT_LE(a, b);
    if (b < 0.99 * tau_infinity(rate, gh)) EXPECT_LT(a, b);
    EXPECT_LE(a, tau_infinity(rate, gh));
    if (a < 0.999 * tau_infinity(rate, gh)) EXPECT_NEAR(inverse_time_change(a, rate, gh), t1, 1e-12 * std::max(1.0, t1));
  }
}

// Property: algebraic identities over random FastGood triples.
TEST(ExponentBundle, IdentitiesOverRandomTriples) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const auto prm = random_fast_good(rng);
    const auto b = exponent_bundle(prm, logistic());
    EXPECT_GT(b.sigmaStar, 0);
    EXPECT_GT(b.kappa, 0);
    EXPECT_GT(b.alpha, 0);
    EXPECT_GT(b.k, 0);
    EXPECT_GT(b.d1, 0);
    EXPECT_GT(b.d2, 0);
    EXPECT_GT(b.d3, 0);
    EXPECT_NEAR(1.0 + b.alpha * b.gammaHat, b.alpha * prm.p / prm.N, 1e-12 * b.alpha * prm.p / prm.N);
  }
}

TEST(SelfSimilarExponents, IdentitiesOverRandomInputs) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> up(1.05, 6), uf(0.01, 0.99);
  for (int i = 0; i < 1000; ++i) {
    const double p = up(rng);
    const double lmax = p > 2 ? p / (p - 2) : 10.0;
    const double lambda = uf(rng) * lmax;
    const auto e = self_similar_exponents(lambda, p);
    EXPECT_LT(e.alphaLambda, 0);
    EXPECT_GT(e.betaLambda, 0);
    EXPECT_NEAR(e.alphaLambda + lambda * e.betaLambda, 0.0, 1e-12);
    EXPECT_NEAR(2 * e.alphaLambda + 1, (e.alphaLambda + e.betaLambda) * p, 1e-12);
  }
}

TEST(Reaction, LogisticAndCustomValidation) {
  auto f = logistic();
  EXPECT_EQ(f.fPrime0, 1.0);
  EXPECT_EQ(f.fPrime1, -1.0);
  EXPECT_DOUBLE_EQ(f(0.5), 0.25);
  auto g = custom_reaction([](double u) { return u * (1 - u * u); });
  EXPECT_NEAR(g.fPrime0, 1.0, 1e-9);
  EXPECT_NEAR(g.fPrime1, -2.0, 1e-6);
  // convex somewhere
  EXPECT_THROW(custom_reaction([](double u) { return u * (1 - u) * (1 - u); }), ParameterError);
  // f(1) != 0
  EXPECT_THROW(custom_reaction([](double u) { return u * (1.1 - u); }), ParameterError);
  // negative inside
  EXPECT_THROW(custom_reaction([](double u) { return u * (u - 1); }), ParameterError);
}

TEST(SphereArea, KnownValues) {
  EXPECT_EQ(sphere_area(1), 2.0);
  EXPECT_NEAR(sphere_area(2), 2 * M_PI, 1e-14);
  EXPECT_NEAR(sphere_area(3), 4 * M_PI, 1e-13);
}
