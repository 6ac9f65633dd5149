#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "perpetua/errors.hpp"
#include "perpetua/kappa_analysis.hpp"
#include "perpetua/mellin.hpp"
#include "perpetua/montecarlo.hpp"
#include "perpetua/serialize.hpp"
#include "perpetua/special.hpp"

namespace perpetua::cli {

namespace {

using json = nlohmann::ordered_json;

double parse_number(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ParseError("bad number in grid: '" + std::string(text) + "'");
  }
  return v;
}

json optional_bool(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

json entry_json(const CatalogEntry& e) {
  json params = json::object();
  for (const auto& [k, v] : e.params) params[k] = v;
  json closed = json::array();
  if (e.closed_R) closed.push_back("R");
  if (e.closed_I) closed.push_back("I");
  if (e.closed_kappa) closed.push_back("kappa");
  if (e.potential) closed.push_back("potential");
  return json{{"id", e.id},
              {"family", e.family},
              {"params", params},
              {"complete", std::string(to_string(e.function.is_complete_bernstein()))},
              {"in_sigma", std::string(to_string(e.function.is_in_sigma()))},
              {"closed_forms", closed},
              {"law_I", e.known_law_I ? json(e.known_law_I->id()) : json(nullptr)},
              {"law_R", e.known_law_R ? json(e.known_law_R->id()) : json(nullptr)},
              {"expected",
               {{"r_mid", optional_bool(e.expected.r_mid)},
                {"i_mid", optional_bool(e.expected.i_mid)},
                {"logR_sd", optional_bool(e.expected.logR_sd)},
                {"logI_sd", optional_bool(e.expected.logI_sd)}}}};
}

bool matches(const CatalogEntry& e, const std::string& filter) {
  if (filter.empty()) return true;
  if (filter == "sigma") return e.function.is_in_sigma() == Flag::yes;
  if (filter == "complete") return e.function.is_complete_bernstein() == Flag::yes;
  return e.family == filter || e.id.find(filter) != std::string::npos;
}

std::string text_or_dash(const std::optional<bool>& b) {
  if (!b) return "?";
  return *b ? "true" : "false";
}

int cmd_catalog(const RunConfig& cfg, std::ostream& os) {
  std::vector<CatalogEntry> entries;
  for (auto& e : catalog()) {
    if (matches(e, cfg.filter)) entries.push_back(std::move(e));
  }
  if (cfg.format == Format::json) {
    json arr = json::array();
    for (const auto& e : entries) arr.push_back(entry_json(e));
    os << arr.dump(2) << "\n";
    return kOk;
  }
  if (cfg.format == Format::csv) {
    os << "id,family,complete,in_sigma,law_I,law_R,r_mid,i_mid,logR_sd,logI_sd\n";
    for (const auto& e : entries) {
      os << '"' << e.id << "\"," << e.family << "," << to_string(e.function.is_complete_bernstein()) << ","
         << to_string(e.function.is_in_sigma()) << ","
         << (e.known_law_I ? e.known_law_I->id() : "") << ","
         << (e.known_law_R ? e.known_law_R->id() : "") << "," << text_or_dash(e.expected.r_mid)
         << "," << text_or_dash(e.expected.i_mid) << "," << text_or_dash(e.expected.logR_sd) << ","
         << text_or_dash(e.expected.logI_sd) << "\n";
    }
    return kOk;
  }
  for (const auto& e : entries) {
    os << e.describe() << "\n";
    os << "  expected: r_mid=" << text_or_dash(e.expected.r_mid)
       << " i_mid=" << text_or_dash(e.expected.i_mid)
       << " logR_sd=" << text_or_dash(e.expected.logR_sd)
       << " logI_sd=" << text_or_dash(e.expected.logI_sd) << "\n";
  }
  return kOk;
}

int cmd_mellin(const RunConfig& cfg, std::ostream& os) {
  const CatalogEntry entry = make_entry(cfg.entry);
  const BernsteinFunction& f = entry.function;
  const std::vector<double> grid = parse_grid(cfg.grid.empty() ? "0.5:4.5:9" : cfg.grid);
  const ProductOptions opt{std::min(cfg.tol, 1e-8)};

  struct Row {
    MellinResult R_prod, I_prod;
    std::optional<MellinResult> R_int, I_int;
    double gamma_check = 0.0;
  };
  std::vector<Row> rows;
  for (double r : grid) {
    Row row;
    row.R_prod = R_product(f, r, opt);
    row.I_prod = I_product(f, r, opt);
    if (entry.closed_kappa) {
      row.R_int = R_integral(f, *entry.closed_kappa, r);
      row.I_int = I_integral(f, *entry.closed_kappa, r);
    }
    row.gamma_check = row.R_prod.value * row.I_prod.value / std::exp(log_gamma(r));
    rows.push_back(row);
  }

  auto opt_json = [](const std::optional<MellinResult>& m) { return m ? json(*m) : json(nullptr); };
  auto opt_text = [](const std::optional<MellinResult>& m) {
    return m ? format_double(m->value) : std::string("-");
  };
  if (cfg.format == Format::json) {
    json arr = json::array();
    for (const auto& row : rows) {
      arr.push_back({{"r", row.R_prod.r},
                     {"R_product", row.R_prod},
                     {"R_integral", opt_json(row.R_int)},
                     {"I_product", row.I_prod},
                     {"I_integral", opt_json(row.I_int)},
                     {"gamma_check", row.gamma_check}});
    }
    os << json{{"entry", entry.id}, {"rows", arr}}.dump(2) << "\n";
    return kOk;
  }
  const char sep = cfg.format == Format::csv ? ',' : ' ';
  os << "r" << sep << "R_prod" << sep << "R_int" << sep << "I_prod" << sep << "I_int" << sep
     << "gamma_check\n";
  for (const auto& row : rows) {
    const std::string missing = cfg.format == Format::csv ? "" : "-";
    os << format_double(row.R_prod.r) << sep << format_double(row.R_prod.value) << sep
       << (row.R_int ? opt_text(row.R_int) : missing) << sep << format_double(row.I_prod.value)
       << sep << (row.I_int ? opt_text(row.I_int) : missing) << sep
       << format_double(row.gamma_check) << "\n";
  }
  return kOk;
}

int cmd_classify(const RunConfig& cfg, std::ostream& os) {
  const CatalogEntry entry = make_entry(cfg.entry);
  const ClassificationReport rep = classify(entry);
  if (cfg.format == Format::json) {
    os << json(rep).dump(2) << "\n";
    return kOk;
  }
  if (cfg.format == Format::csv) {
    os << "entry,r_mid,i_mid,logR_sd,logI_sd,method\n";
    os << '"' << rep.entry << "\"," << rep.r_mid << "," << rep.i_mid << "," << rep.logR_sd << ","
       << rep.logI_sd << "," << rep.method << "\n";
    return kOk;
  }
  os << rep.entry << "\n"
     << std::boolalpha << "  r_mid   " << rep.r_mid << "\n  i_mid   " << rep.i_mid
     << "\n  logR_sd " << rep.logR_sd << "\n  logI_sd " << rep.logI_sd << "\n  method  "
     << rep.method << "\n";
  for (const auto& w : rep.witnesses) {
    os << "  witness " << w.check << " at x=" << format_double(w.x) << "\n";
  }
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& os) {
  const CatalogEntry entry = make_entry(cfg.entry);
  const mc::SubordinatorModel model = mc::model_for(entry);
  const std::vector<double> rs = parse_grid(cfg.grid.empty() ? "2:4:3" : cfg.grid);
  mc::SimulationOptions o;
  o.n_samples = cfg.n;
  o.dl = cfg.dl;
  o.L = cfg.L;
  o.seed = cfg.seed;

  std::vector<mc::PerpetuityEstimate> estimates;
  if (cfg.refine > 1) {
    for (double r : rs) {
      for (auto& e : mc::refinement_study(model, r, o, cfg.refine)) estimates.push_back(e);
    }
  } else {
    estimates = mc::estimate_mellin_I(model, rs, o);
  }

  if (cfg.format == Format::json) {
    os << json(estimates).dump(2) << "\n";
    return kOk;
  }
  os << csv_header_estimate() << "\n";
  for (const auto& e : estimates) os << csv_row(e) << "\n";
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& os) {
  std::vector<CatalogEntry> entries;
  if (cfg.all) {
    entries = catalog();
  } else {
    if (cfg.entry.empty()) throw ParseError("verify needs an entry id or --all");
    entries.push_back(make_entry(cfg.entry));
  }
  std::vector<CheckLine> lines;
  for (const auto& e : entries) {
    for (auto& line : verify_entry(e, cfg)) lines.push_back(std::move(line));
  }
  const bool ok = std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass; });

  if (cfg.format == Format::json) {
    json checks = json::array();
    json failures = json::array();
    for (const auto& l : lines) {
      json j{{"entry", l.entry}, {"check", l.check}, {"pass", l.pass}, {"detail", l.detail}};
      if (!l.pass) failures.push_back(j);
      checks.push_back(std::move(j));
    }
    os << json{{"pass", ok}, {"checks", checks}, {"failures", failures}}.dump(2) << "\n";
  } else {
    for (const auto& l : lines) {
      os << (l.pass ? "PASS " : "FAIL ") << l.entry << " " << l.check << " " << l.detail << "\n";
    }
    os << (ok ? "all checks passed" : "some checks failed") << "\n";
  }
  return ok ? kOk : kCheckFailure;
}

}  // namespace

std::vector<double> parse_grid(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = spec.find(':', start);
    parts.push_back(spec.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  bool log_spacing = false;
  if (parts.size() == 4) {
    if (parts[3] != "log" && parts[3] != "lin") {
      throw ParseError("grid spacing must be 'log' or 'lin'");
    }
    log_spacing = parts[3] == "log";
    parts.pop_back();
  }
  if (parts.size() != 3) throw ParseError("grid must be start:stop:count[:log]");
  const double lo = parse_number(parts[0]);
  const double hi = parse_number(parts[1]);
  long count = 0;
  const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
  if (ec != std::errc() || ptr != parts[2].data() + parts[2].size()) {
    throw ParseError("grid count must be an integer");
  }
  if (count < 1) throw ParseError("grid count must be >= 1");
  if (log_spacing && !(lo > 0.0 && hi > 0.0)) throw ParseError("log grid needs positive ends");
  if (count == 1) return {lo};
  if (log_spacing) {
    std::vector<double> g = log_grid(lo, hi, static_cast<int>(count));
    g.front() = lo;
    return g;
  }
  std::vector<double> g(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    g[std::size_t(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  g.back() = hi;
  return g;
}

Format parse_format(std::string_view name) {
  if (name == "text") return Format::text;
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  throw ParseError("format must be text, json or csv");
}

int run(int argc, char** argv) {
  RunConfig cfg;
  std::string format = "text";
  bool json_flag = false;

  CLI::App app{"Mellin transforms, classification and simulation of exponential functionals"};
  app.require_subcommand(1);

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", format, "text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_flag("--json", json_flag, "shorthand for --format json");
    sub->add_option("--out", cfg.out, "write output to this file");
  };
  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
  };
  auto add_mc = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "number of samples")->check(CLI::Range(2L, 1L << 40));
    sub->add_option("--dl", cfg.dl, "time step")->check(CLI::PositiveNumber);
    sub->add_option("--L", cfg.L, "horizon (0: automatic)")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
  };

  CLI::App* catalog_cmd = app.add_subcommand("catalog", "list catalog entries");
  catalog_cmd->add_option("--filter", cfg.filter, "family, id substring, 'sigma' or 'complete'");
  add_output(catalog_cmd);

  CLI::App* mellin_cmd = app.add_subcommand("mellin", "R and I Mellin transforms on a grid");
  mellin_cmd->add_option("entry", cfg.entry, "entry id")->required();
  mellin_cmd->add_option("--grid", cfg.grid, "start:stop:count[:log]");
  add_tol(mellin_cmd);
  add_output(mellin_cmd);

  CLI::App* classify_cmd = app.add_subcommand("classify", "m.i.d. and self-decomposability");
  classify_cmd->add_option("entry", cfg.entry, "entry id")->required();
  add_output(classify_cmd);

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimates of E[I^{r-1}]");
  simulate_cmd->add_option("entry", cfg.entry, "entry id")->required();
  simulate_cmd->add_option("--grid", cfg.grid, "values of r, start:stop:count[:log]");
  simulate_cmd->add_option("--refine", cfg.refine, "dl halvings for a refinement study")
      ->check(CLI::Range(1, 12));
  add_mc(simulate_cmd);
  add_output(simulate_cmd);

  CLI::App* verify_cmd = app.add_subcommand("verify", "run the invariant suite");
  verify_cmd->add_option("entry", cfg.entry, "entry id");
  verify_cmd->add_flag("--all", cfg.all, "every catalog entry");
  verify_cmd->add_flag("--mc", cfg.monte_carlo, "include Monte Carlo moment checks");
  add_tol(verify_cmd);
  add_mc(verify_cmd);
  add_output(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    cfg.format = json_flag ? Format::json : parse_format(format);
    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw ParseError("cannot open output file " + cfg.out);
    }
    std::ostream& os = cfg.out.empty() ? std::cout : file;
    os.precision(17);
    if (catalog_cmd->parsed()) return cmd_catalog(cfg, os);
    if (mellin_cmd->parsed()) return cmd_mellin(cfg, os);
    if (classify_cmd->parsed()) return cmd_classify(cfg, os);
    if (simulate_cmd->parsed()) return cmd_simulate(cfg, os);
    return cmd_verify(cfg, os);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailure;
  }
}

}  // namespace perpetua::cli
