#include <gtest/gtest.h>

#include "cli.hpp"
#include "perpetua/errors.hpp"

using namespace perpetua;
using perpetua::cli::parse_grid;

TEST(Grid, Linear) {
  EXPECT_EQ(parse_grid("1:5:5"), (std::vector<double>{1, 2, 3, 4, 5}));
  EXPECT_EQ(parse_grid("2:2:1"), (std::vector<double>{2}));
  EXPECT_EQ(parse_grid("0:1:3:lin"), (std::vector<double>{0, 0.5, 1}));
}

TEST(Grid, Logarithmic) {
  const auto g = parse_grid("0.01:100:5:log");
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.front(), 0.01);
  EXPECT_NEAR(g[2], 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(g.back(), 100.0);
}

TEST(Grid, Malformed) {
  for (const char* bad : {"", "1:2", "1:2:0", "a:2:3", "1:2:3:cubic", "1:2:3:log:x", "0:1:3:log",
                          "1:2:2.5"}) {
    EXPECT_THROW(parse_grid(bad), ParseError) << bad;
  }
}

TEST(Format, Names) {
  EXPECT_EQ(cli::parse_format("csv"), cli::Format::csv);
  EXPECT_THROW(cli::parse_format("xml"), ParseError);
}

TEST(Verify, StableEntryPasses) {
  cli::RunConfig cfg;
  cfg.tol = 1e-6;
  const auto lines = cli::verify_entry(make_entry("stable:alpha=0.5"), cfg);
  bool saw_swap = false;
  for (const auto& l : lines) {
    EXPECT_TRUE(l.pass) << l.check << ": " << l.detail;
    saw_swap |= l.check == "swap_check";
  }
  EXPECT_TRUE(saw_swap);
}
