#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "perpetua/catalog.hpp"
#include "perpetua/errors.hpp"
#include "perpetua/mellin.hpp"
#include "support/generators.hpp"

using namespace perpetua;

namespace {

const BernsteinFunction& trivial() {
  static const BernsteinFunction f = make_entry("trivial").function;
  return f;
}

BernsteinFunction stable(double a) { return make_entry("stable:alpha=" + format_number(a)).function; }

}  // namespace

TEST(Moments, IntegerMomentsOfI) {
  EXPECT_DOUBLE_EQ(moments_I(trivial(), 4), 1.0);
  EXPECT_NEAR(moments_I(make_entry("expcp:c=1").function, 2), 6.0, 1e-13);
  EXPECT_NEAR(moments_I(stable(0.5), 2), std::sqrt(2.0), 1e-14);
  EXPECT_THROW(moments_I(trivial(), 0), DomainError);
}

TEST(Moments, IntegerMomentsOfR) {
  EXPECT_DOUBLE_EQ(moments_R(trivial(), 3), 6.0);
  EXPECT_NEAR(moments_R(make_entry("expcp:c=1").function, 3), 0.25, 1e-15);
  EXPECT_NEAR(moments_R(make_entry("gamma").function, 1), std::log(2.0), 1e-15);
}

TEST(Products, GammaReduction) {
  EXPECT_DOUBLE_EQ(R_product(trivial(), 4.0).value, 6.0);
  for (double r : {0.5, 1.0, 2.0, 3.0, 4.5}) {
    EXPECT_NEAR(R_product(trivial(), r).value / std::tgamma(r), 1.0, 1e-8) << r;
  }
  EXPECT_NEAR(R_product(trivial(), 0.5).value, std::sqrt(std::numbers::pi), 1e-8);
}

TEST(Products, SpecExamples) {
  EXPECT_NEAR(R_product(stable(0.5), 3.0).value, std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(R_product(make_entry("expcp:c=2").function, 2.0).value, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(I_product(trivial(), 7.3).value, 1.0, 1e-8);
  EXPECT_NEAR(I_product(stable(0.5), 3.0).value, std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(I_product(make_entry("expcp:c=1").function, 3.0).value, 6.0, 1e-8);
}

TEST(Products, InvalidArguments) {
  EXPECT_THROW(R_product(trivial(), 0.0), DomainError);
  EXPECT_THROW(I_product(trivial(), -1.0), DomainError);
  EXPECT_THROW(R_product(trivial(), 1.5, {0.0}), DomainError);
}

TEST(Products, NonConvergenceReported) {
  ProductOptions opt;
  opt.tol = 1e-300;
  opt.max_terms = 1 << 12;
  try {
    R_product(make_entry("gamma").function, 0.5, opt);
    FAIL() << "expected NonConvergenceError";
  } catch (const NonConvergenceError& e) {
    EXPECT_GT(e.best_value(), 0.0);
  }
}

TEST(Products, RawSequenceApproachesLimit) {
  const BernsteinFunction f = stable(0.5);
  const auto seq = product_sequence(f, 0.5, 14);
  const double limit = std::pow(std::tgamma(0.5), 0.5);
  double prev = INFINITY;
  for (double v : seq) {
    const double err = std::fabs(v / limit - 1.0);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(ProductsProperty, StableClosedForms) {
  prop::Gen gen(23);
  for (int i = 0; i < prop::kCases; ++i) {
    const double a = gen.uniform(0.1, 0.9);
    const double r = gen.uniform(0.2, 6.0);
    const BernsteinFunction f = stable(a);
    const double lg = std::lgamma(r);
    EXPECT_NEAR(std::log(R_product(f, r).value), a * lg, 1e-7) << "a=" << a << " r=" << r;
    EXPECT_NEAR(std::log(I_product(f, r).value), (1.0 - a) * lg, 1e-7) << "a=" << a << " r=" << r;
  }
}

TEST(ProductsProperty, FunctionalEquations) {
  prop::Gen gen(29);
  const auto entries = catalog();
  for (int i = 0; i < prop::kCases; ++i) {
    const auto& e = entries[static_cast<std::size_t>(gen.integer(0, int(entries.size()) - 1))];
    const double r = gen.uniform(0.1, 5.0);
    const double grid[] = {r};
    const auto res = check_functional_eqs(e.function, grid);
    EXPECT_LE(res[0].R_residual, 1e-7) << e.id << " r=" << r;
    EXPECT_LE(res[0].I_residual, 1e-7) << e.id << " r=" << r;
  }
}

TEST(ProductsProperty, GammaFactorization) {
  prop::Gen gen(31);
  const auto entries = catalog();
  for (int i = 0; i < prop::kCases; ++i) {
    const auto& e = entries[static_cast<std::size_t>(gen.integer(0, int(entries.size()) - 1))];
    const double r = gen.uniform(0.1, 6.0);
    const double prod = I_product(e.function, r).value * R_product(e.function, r).value;
    EXPECT_NEAR(prod / std::tgamma(r), 1.0, 1e-7) << e.id << " r=" << r;
  }
}

TEST(ProductsProperty, IntegerMomentsAgree) {
  for (const auto& e : catalog()) {
    for (int n = 1; n <= 6; ++n) {
      EXPECT_NEAR(R_product(e.function, n + 1.0).value / moments_R(e.function, n), 1.0, 1e-12);
      EXPECT_NEAR(I_product(e.function, n + 1.0).value / moments_I(e.function, n), 1.0, 1e-12);
    }
  }
}

TEST(LogConvex, Examples) {
  std::vector<std::pair<double, double>> gamma_values;
  for (double r : {1.0, 2.0, 3.0, 4.0}) gamma_values.emplace_back(r, std::tgamma(r));
  EXPECT_TRUE(check_logconvex(gamma_values));

  std::vector<std::pair<double, double>> stable_values;
  for (int i = 0; i < 12; ++i) {
    const double r = 0.5 + 0.5 * i;
    stable_values.emplace_back(r, R_product(stable(0.5), r).value);
  }
  EXPECT_TRUE(check_logconvex(stable_values));

  std::vector<std::pair<double, double>> concave;
  for (int i = 0; i < 10; ++i) {
    const double r = 0.25 * i;
    concave.emplace_back(r, std::exp(-r * r));
  }
  EXPECT_FALSE(check_logconvex(concave));
}

TEST(LogConvex, RejectsBadInput) {
  const std::vector<std::pair<double, double>> two{{1.0, 1.0}, {2.0, 1.0}};
  EXPECT_THROW(check_logconvex(two), ShapeError);
  const std::vector<std::pair<double, double>> uneven{{1.0, 1.0}, {2.0, 1.0}, {4.0, 6.0}};
  EXPECT_THROW(check_logconvex(uneven), ShapeError);
  const std::vector<std::pair<double, double>> nonpositive{{1.0, 1.0}, {2.0, 0.0}, {3.0, 2.0}};
  EXPECT_THROW(check_logconvex(nonpositive), ShapeError);
}

// Gamma(r) (1 + eps sin^2(pi r)) equals 1 at r = 1 and obeys v(r+1) = r v(r),
// yet it is not log-convex; the check must notice.
TEST(LogConvexProperty, PerturbedGammaDetected) {
  prop::Gen gen(37);
  for (int i = 0; i < prop::kCases; ++i) {
    const double eps = gen.uniform(0.1, 2.0);
    const double start = gen.uniform(0.5, 2.0);
    auto v = [eps](double r) {
      const double s = std::sin(std::numbers::pi * r);
      return std::tgamma(r) * (1.0 + eps * s * s);
    };
    EXPECT_NEAR(v(1.0), 1.0, 1e-12);
    EXPECT_NEAR(v(start + 1.0) / (start * v(start)), 1.0, 1e-12);
    std::vector<std::pair<double, double>> values;
    for (int k = 0; k <= 60; ++k) {
      const double r = start + 0.05 * k;
      values.emplace_back(r, v(r));
    }
    EXPECT_FALSE(check_logconvex(values)) << "eps=" << eps;
  }
}

TEST(Products, IdentityOnReferenceGrid) {
  for (const auto& e : catalog()) {
    for (double r : {0.3, 0.7, 1.0, 1.5, 2.8, 5.0}) {
      const double prod = I_product(e.function, r).value * R_product(e.function, r).value;
      EXPECT_NEAR(prod / std::tgamma(r), 1.0, 1e-6) << e.id << " r=" << r;
    }
  }
}

TEST(ProductsProperty, SequenceDecreasesToLimit) {
  prop::Gen gen(59);
  const auto entries = catalog();
  for (int i = 0; i < prop::kCases; ++i) {
    const auto& e = entries[static_cast<std::size_t>(gen.integer(0, int(entries.size()) - 1))];
    const double r0 = gen.uniform(0.05, 1.0);
    const auto seq = product_sequence(e.function, r0, 12);
    const double limit = R_product(e.function, r0, {1e-10}).value;
    for (std::size_t k = 1; k < seq.size(); ++k) {
      EXPECT_LE(seq[k], seq[k - 1] * (1.0 + 1e-13)) << e.id << " r0=" << r0 << " k=" << k;
    }
    EXPECT_GE(seq.back(), limit * (1.0 - 1e-8)) << e.id << " r0=" << r0;
  }
}
