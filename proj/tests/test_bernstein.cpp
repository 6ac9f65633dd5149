#include <gtest/gtest.h>

#include <cmath>

#include "perpetua/bernstein.hpp"
#include "perpetua/catalog.hpp"
#include "perpetua/errors.hpp"
#include "support/generators.hpp"

using namespace perpetua;

namespace {

BernsteinFunction identity() { return make_entry("trivial").function; }

BernsteinFunction power(double a) {
  return BernsteinFunction("s^a", [a](double s) { return std::pow(s, a); });
}

}  // namespace

TEST(Bernstein, EvaluatesCatalogExamples) {
  EXPECT_DOUBLE_EQ(eval_phi(identity(), 3.0), 3.0);
  EXPECT_NEAR(eval_phi(make_entry("gamma").function, 1.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(eval_phi(make_entry("expcp:c=1").function, 2.0), 2.0 / 3.0, 1e-15);
}

TEST(Bernstein, NegativeArgumentRejected) {
  EXPECT_THROW(identity()(-1.0), DomainError);
}

TEST(Bernstein, FromLevyTriple) {
  EXPECT_NEAR(eval_phi_from_levy(LevyTriple(1.0), 5.0), 5.0, 1e-14);
  const double c = 1.0 / (2.0 * std::tgamma(0.5));
  const LevyTriple stable(0.0, [c](double x) { return c * std::pow(x, -1.5); });
  EXPECT_NEAR(eval_phi_from_levy(stable, 4.0), 2.0, 1e-8);
  const LevyTriple expcp(0.0, [](double x) { return std::exp(-x); });
  EXPECT_NEAR(eval_phi_from_levy(expcp, 1.0), 0.5, 1e-12);
}

TEST(Bernstein, LevyTripleValidation) {
  EXPECT_THROW(LevyTriple(-1.0), ValidationError);
  EXPECT_THROW(LevyTriple(0.0, {}, {{0.0, 1.0}}), ValidationError);
  EXPECT_THROW(LevyTriple(0.0, {}, {{1.0, -1.0}}), ValidationError);
  // x^{-2} is not integrable against x ^ 1 near the origin.
  EXPECT_THROW(LevyTriple(0.0, [](double x) { return 1.0 / (x * x); }), Error);
}

TEST(Bernstein, TailAndSmallJumps) {
  const LevyTriple expcp(0.0, [](double x) { return 2.0 * std::exp(-2.0 * x); });
  EXPECT_NEAR(expcp.tail(0.5), std::exp(-1.0), 1e-12);
  // int_0^eps 2 y e^{-2y} dy
  const double eps = 0.1;
  const double oracle = 0.5 * (1.0 - std::exp(-2.0 * eps) * (1.0 + 2.0 * eps));
  EXPECT_NEAR(expcp.small_jump_mean(eps), oracle, 1e-13);
}

TEST(Bernstein, Conjugates) {
  const BernsteinFunction half = make_entry("stable:alpha=0.5").function;
  const BernsteinFunction hc = conjugate(half);
  for (double s : {0.3, 1.0, 7.0}) EXPECT_NEAR(hc(s), std::sqrt(s), 1e-14);

  const BernsteinFunction ic = conjugate(identity());
  for (double s : {0.3, 1.0, 7.0}) EXPECT_DOUBLE_EQ(ic(s), 1.0);

  const BernsteinFunction ec = conjugate(make_entry("expcp:c=2").function);
  EXPECT_NEAR(ec(3.0), 5.0, 1e-13);
  EXPECT_NEAR(ec(0.0), 2.0, 1e-12);
  EXPECT_NE(ec(0.0), 0.0);
}

TEST(Bernstein, PowerSubordination) {
  const BernsteinFunction sqrt_s = power_subordinate(identity(), 0.5);
  EXPECT_NEAR(sqrt_s(9.0), 3.0, 1e-14);
  const BernsteinFunction quarter = power_subordinate(make_entry("stable:alpha=0.5").function, 0.5);
  EXPECT_NEAR(quarter(16.0), 2.0, 1e-14);
  const BernsteinFunction g = power_subordinate(make_entry("gamma").function, 1.0 / 3.0);
  EXPECT_NEAR(g(1.0), 0.8850, 1e-4);
  EXPECT_NEAR(g(1.0), std::cbrt(std::log(2.0)), 1e-15);
}

TEST(Bernstein, DerivativeFallback) {
  const BernsteinFunction f = power(0.5);
  EXPECT_FALSE(f.has_closed_derivative());
  EXPECT_NEAR(f.derivative(4.0), 0.25, 1e-8);
}

TEST(BernsteinProperty, CatalogShapes) {
  const auto grid = log_grid(1e-3, 1e3, 61);
  for (const auto& e : catalog()) {
    EXPECT_TRUE(check_shape(e.function, grid).ok()) << e.id;
  }
}

TEST(Bernstein, ShapeRejectsConvexFunction) {
  const auto grid = log_grid(1e-2, 1e2, 21);
  const ShapeCheck sq = check_shape(power(2.0), grid);
  EXPECT_TRUE(sq.nondecreasing);
  EXPECT_FALSE(sq.concave);
  BernsteinTraits t;
  t.value_at_zero = 1.0;
  const BernsteinFunction shifted("1+s", [](double s) { return 1.0 + s; }, {}, std::nullopt, t);
  EXPECT_FALSE(check_shape(shifted, grid).null_at_zero);
}

TEST(BernsteinProperty, LevyMatchesClosedForms) {
  const auto grid = log_grid(1e-2, 1e2, 9);
  for (const auto& e : catalog()) {
    if (!e.function.levy()) continue;
    EXPECT_LE(levy_consistency_gap(e.function, grid), 1e-8) << e.id;
  }
}

TEST(BernsteinProperty, ConjugateInvolution) {
  prop::Gen gen(17);
  for (int i = 0; i < prop::kCases; ++i) {
    const double a = gen.uniform(0.05, 0.95);
    const double s = gen.log_uniform(1e-3, 1e3);
    const BernsteinFunction f = power(a);
    EXPECT_NEAR(conjugate(conjugate(f))(s) / f(s), 1.0, 1e-13);
    EXPECT_NEAR(conjugate(f)(s) * f(s) / s, 1.0, 1e-13);
  }
}

TEST(Bernstein, LogGrid) {
  const auto g = log_grid(1e-4, 50.0, 200);
  ASSERT_EQ(g.size(), 200u);
  EXPECT_DOUBLE_EQ(g.front(), 1e-4);
  EXPECT_DOUBLE_EQ(g.back(), 50.0);
  EXPECT_NEAR(g[1] / g[0], g[199] / g[198], 1e-12);
}
