#include <gtest/gtest.h>

#include <cmath>

#include "perpetua/errors.hpp"
#include "perpetua/special.hpp"
#include "support/generators.hpp"

using namespace perpetua;

TEST(Special, GammaFactorials) {
  double fact = 1.0;
  for (int n = 1; n <= 10; ++n) {
    EXPECT_NEAR(gamma_fn(n) / fact, 1.0, 1e-14);
    fact *= n;
  }
  EXPECT_NEAR(gamma_fn(0.5), std::sqrt(M_PI), 1e-14);
}

TEST(Special, DomainChecks) {
  EXPECT_THROW(gamma_fn(0.0), DomainError);
  EXPECT_THROW(log_gamma(-1.0), DomainError);
  EXPECT_THROW(digamma(0.0), DomainError);
}

TEST(Special, DigammaAtOne) { EXPECT_NEAR(digamma(1.0), -kEulerGamma, 1e-15); }

TEST(SpecialProperty, DigammaMatchesLogGammaSlope) {
  prop::Gen gen(3);
  for (int i = 0; i < prop::kCases; ++i) {
    const double r = gen.uniform(0.3, 20.0);
    const double h = 1e-5;
    const double slope = (std::lgamma(r + h) - std::lgamma(r - h)) / (2.0 * h);
    EXPECT_NEAR(digamma(r), slope, 1e-8 * std::max(1.0, std::fabs(slope))) << "r=" << r;
  }
}

TEST(SpecialProperty, GammaRatioMatchesLogGamma) {
  prop::Gen gen(5);
  for (int i = 0; i < prop::kCases; ++i) {
    const double x = gen.uniform(0.1, 30.0);
    const double d = gen.uniform(-0.09, 3.0);
    const double oracle = std::exp(std::lgamma(x) - std::lgamma(x + d));
    EXPECT_NEAR(gamma_ratio(x, d) / oracle, 1.0, 1e-12) << "x=" << x << " d=" << d;
  }
  EXPECT_EQ(gamma_ratio(2.5, 0.0), 1.0);
}

TEST(SpecialProperty, IncompleteGammaComplement) {
  prop::Gen gen(7);
  for (int i = 0; i < prop::kCases; ++i) {
    const double a = gen.uniform(0.1, 10.0);
    const double x = gen.uniform(0.01, 20.0);
    EXPECT_NEAR(gamma_p(a, x) + gamma_q(a, x), 1.0, 1e-14);
  }
  EXPECT_NEAR(gamma_q(1.0, 2.0), std::exp(-2.0), 1e-15);
}

TEST(Special, ExponentialIntegralSeries) {
  // E1(x) = -gamma - log x - sum_{k>=1} (-x)^k / (k k!)
  for (double x : {0.01, 0.3, 1.0, 2.5}) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 60; ++k) {
      term *= -x / k;
      sum += term / k;
    }
    EXPECT_NEAR(expint_e1(x), -kEulerGamma - std::log(x) - sum, 1e-13) << "x=" << x;
  }
}
