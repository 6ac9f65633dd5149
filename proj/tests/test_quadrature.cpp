#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "perpetua/errors.hpp"
#include "perpetua/quadrature.hpp"
#include "support/generators.hpp"

using namespace perpetua;

TEST(Quadrature, Polynomial) {
  const auto r = quad::integrate([](double x) { return x * x; }, 2.0, 5.0);
  EXPECT_NEAR(r.value, 39.0, 1e-12);
  EXPECT_LE(r.error, 1e-9);
}

TEST(Quadrature, ReversedBoundsFlipSign) {
  const auto r = quad::integrate([](double x) { return std::exp(x); }, 1.0, 0.0);
  EXPECT_NEAR(r.value, -(std::numbers::e - 1.0), 1e-13);
}

TEST(Quadrature, EmptyInterval) {
  EXPECT_EQ(quad::integrate([](double) { return 1.0; }, 3.0, 3.0).value, 0.0);
}

TEST(Quadrature, EndpointSingularity) {
  const auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 2.0, 1e-10);
}

TEST(Quadrature, ShiftedIntervalAwayFromOrigin) {
  const auto r = quad::integrate([](double x) { return 1.0 / x; }, 10.0, 20.0);
  EXPECT_NEAR(r.value, std::log(2.0), 1e-13);
}

TEST(Quadrature, HalfLineGammaHalf) {
  const auto r =
      quad::integrate_half_line([](double x) { return std::exp(-x) / std::sqrt(x); });
  EXPECT_NEAR(r.value, std::sqrt(std::numbers::pi), 1e-10);
}

TEST(Quadrature, ToInfinity) {
  const auto r = quad::integrate_to_infinity([](double x) { return std::exp(-2.0 * x); }, 1.0);
  EXPECT_NEAR(r.value, 0.5 * std::exp(-2.0), 1e-14);
}

TEST(Quadrature, RequireRaises) {
  quad::QuadResult bad{1.0, 1e-3, 1.0};
  EXPECT_THROW(quad::require(bad, 1e-6, "test"), QuadratureError);
  quad::QuadResult inf{INFINITY, 0.0, 0.0};
  EXPECT_THROW(quad::require(inf, 1e-6, "test"), SingularInputError);
  EXPECT_NO_THROW(quad::require({1.0, 1e-9, 1.0}, 1e-6, "test"));
}

TEST(QuadratureProperty, ExponentialMoments) {
  prop::Gen gen(11);
  for (int i = 0; i < prop::kCases; ++i) {
    const double c = gen.log_uniform(0.1, 10.0);
    const double a = gen.uniform(0.0, 3.0);
    const auto r = quad::integrate_to_infinity([c](double x) { return std::exp(-c * x); }, a);
    EXPECT_NEAR(r.value * c * std::exp(c * a), 1.0, 1e-10) << "c=" << c << " a=" << a;
  }
}
