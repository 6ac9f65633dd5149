#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "perpetua/catalog.hpp"

namespace perpetua::cli {

enum class Format { text, json, csv };

struct RunConfig {
  std::string command;
  std::string entry;
  std::string grid;  // start:stop:count[:log]
  double tol = 1e-6;
  long n = 100000;
  double dl = 1e-3;
  double L = 0.0;  // 0: automatic
  std::uint64_t seed = 1;
  Format format = Format::text;
  std::string out;  // empty: stdout
  std::string filter;
  bool all = false;
  bool monte_carlo = false;
  int refine = 1;
};

enum ExitCode { kOk = 0, kCheckFailure = 1, kUsage = 2, kNonConvergence = 3 };

/// Parses start:stop:count with an optional ":log" suffix for geometric
/// spacing. Throws ParseError for malformed specs, count < 1, or a log grid
/// with a nonpositive end point.
std::vector<double> parse_grid(std::string_view spec);

Format parse_format(std::string_view name);

struct CheckLine {
  std::string entry;
  std::string check;
  bool pass = false;
  std::string detail;
};

/// Every invariant that applies to `entry`. Monte Carlo checks run only when
/// cfg.monte_carlo is set.
std::vector<CheckLine> verify_entry(const CatalogEntry& entry, const RunConfig& cfg);

int run(int argc, char** argv);

}  // namespace perpetua::cli
