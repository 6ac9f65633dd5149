#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "perpetua/catalog.hpp"
#include "perpetua/errors.hpp"
#include "perpetua/mellin.hpp"

using namespace perpetua;

TEST(Catalog, ParsesIds) {
  const EntryId id = parse_entry_id(" GeomCP:c=0.1, q=0.5 ");
  EXPECT_EQ(id.family, "geomcp");
  ASSERT_EQ(id.params.size(), 2u);
  EXPECT_EQ(id.params[0].first, "c");
  EXPECT_DOUBLE_EQ(id.params[1].second, 0.5);
}

TEST(Catalog, RejectsMalformedIds) {
  EXPECT_THROW(parse_entry_id(""), ParseError);
  EXPECT_THROW(parse_entry_id("stable:alpha"), ParseError);
  EXPECT_THROW(parse_entry_id("stable:alpha=x"), ParseError);
  EXPECT_THROW(parse_entry_id("stable:alpha=0.5,alpha=0.6"), ParseError);
  EXPECT_THROW(make_entry("nosuch"), ParseError);
  EXPECT_THROW(make_entry("stable:beta=0.5"), ParseError);
}

TEST(Catalog, RejectsOutOfRangeParameters) {
  EXPECT_THROW(make_entry("stable:alpha=1.5"), DomainError);
  EXPECT_THROW(make_entry("expcp:c=-1"), DomainError);
  EXPECT_THROW(make_entry("geomcp:c=0.6,q=0.5"), DomainError);
}

TEST(Catalog, CanonicalIds) {
  EXPECT_EQ(make_entry("stable").id, "stable:alpha=0.5");
  EXPECT_EQ(make_entry("expcp:c=2").id, "expcp:c=2");
  EXPECT_EQ(make_entry("trivial").id, "trivial");
}

TEST(Catalog, CoversEveryFamily) {
  std::set<std::string> families;
  for (const auto& e : catalog()) families.insert(e.family);
  for (const char* f : {"trivial", "stable", "expcp", "geomcp", "gamma", "by451", "by452", "rou"}) {
    EXPECT_TRUE(families.count(f)) << f;
  }
}

TEST(Catalog, ProductLawMoments) {
  // E[gamma_a^{t}] = Gamma(a+t)/Gamma(a); E[beta_{1,1}^t] = 1/(1+t).
  const ProductLaw g(1.0, {{ProductLaw::Kind::gamma, 2.0, 0.0, 1.0}});
  EXPECT_NEAR(g.mellin(3.0), std::tgamma(4.0) / std::tgamma(2.0), 1e-13);
  const ProductLaw u(1.0, {{ProductLaw::Kind::beta, 1.0, 1.0, 1.0}});
  EXPECT_NEAR(u.mellin(4.0), 0.25, 1e-14);
  const ProductLaw e(2.0, {{ProductLaw::Kind::exponential, 0.0, 0.0, 0.5}});
  EXPECT_NEAR(e.mellin(3.0), 4.0 * std::tgamma(2.0), 1e-13);
  // E[tau^t] = Gamma(1 - t/a) / Gamma(1 - t) for the positive stable law.
  const ProductLaw s(1.0, {{ProductLaw::Kind::positive_stable, 0.5, 0.0, 1.0}});
  EXPECT_NEAR(s.mellin(0.5), std::tgamma(2.0) / std::tgamma(1.5), 1e-13);
  EXPECT_EQ(ProductLaw::point(3.0).mellin(2.0), 3.0);
}

TEST(Catalog, LawsMatchMellinTransforms) {
  for (const auto& e : catalog()) {
    for (double r : {1.5, 2.0, 3.0}) {
      if (e.known_law_I) {
        EXPECT_NEAR(e.known_law_I->mellin(r) / I_product(e.function, r).value, 1.0, 1e-7)
            << e.id << " r=" << r;
      }
      if (e.known_law_R) {
        EXPECT_NEAR(e.known_law_R->mellin(r) / R_product(e.function, r).value, 1.0, 1e-7)
            << e.id << " r=" << r;
      }
    }
  }
}

TEST(Catalog, ClosedFormsMatchProducts) {
  for (const auto& e : catalog()) {
    for (double r : {0.5, 1.5, 2.0, 3.0, 5.0}) {
      if (e.closed_R) EXPECT_NEAR(e.closed_R(r) / R_product(e.function, r).value, 1.0, 1e-8) << e.id;
      if (e.closed_I) EXPECT_NEAR(e.closed_I(r) / I_product(e.function, r).value, 1.0, 1e-8) << e.id;
    }
  }
}

TEST(Catalog, GeometricQProducts) {
  // c = 0: R(2) = Phi(1) = 1 - q, and I(2) = 1 / Phi(1).
  EXPECT_NEAR(geomcp_R_qproduct(0.0, 0.5, 2.0), 0.5, 1e-15);
  EXPECT_NEAR(geomcp_I_qproduct(0.0, 0.5, 2.0), 2.0, 1e-15);
  for (double c : {0.0, 0.1}) {
    const auto e = geomcp_entry(c, 0.5);
    for (double r : {1.5, 2.0, 3.0}) {
      EXPECT_NEAR(geomcp_R_qproduct(c, 0.5, r) / R_product(e.function, r).value, 1.0, 1e-9);
      EXPECT_NEAR(geomcp_I_qproduct(c, 0.5, r) / I_product(e.function, r).value, 1.0, 1e-9);
    }
  }
}

TEST(Catalog, RadialOuSpecialCases) {
  // 2 mu alpha = 1 gives R ~ gamma_alpha^alpha; 2 mu (1 - alpha) = 1 gives
  // I ~ (1/beta) e^beta with beta = 1 - alpha.
  const auto a = rou_entry(0.25, 2.0);
  ASSERT_TRUE(a.known_law_R);
  EXPECT_EQ(a.known_law_R->id(), "gamma(0.25)^0.25");
  EXPECT_TRUE(a.expected.logR_sd.value_or(false));
  const auto b = rou_entry(0.75, 2.0);
  ASSERT_TRUE(b.known_law_I);
  EXPECT_TRUE(b.expected.logR_sd.value_or(false));
  const auto generic = rou_entry(0.3, 1.0);
  EXPECT_FALSE(generic.expected.logR_sd.has_value() && *generic.expected.logR_sd);
}
