// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "perpetua/catalog.hpp"
#include "perpetua/conjugacy.hpp"
#include "perpetua/kappa_analysis.hpp"
#include "perpetua/mellin.hpp"
#include "perpetua/montecarlo.hpp"
#include "perpetua/special.hpp"

using namespace perpetua;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel(double a, double b) { return std::fabs(a / b - 1.0); }

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Outcome within(double worst, double tol) {
  return {worst <= tol, "max rel err " + num(worst) + " (tol " + num(tol) + ")"};
}

const double kGrid[] = {0.5, 1.0, 1.5, 2.0, 3.0, 5.0};

Outcome gamma_reduction() {
  const BernsteinFunction f = trivial_entry().function;
  double worst = 0.0;
  for (double r : {0.5, 1.0, 2.0, 3.0, 4.5}) {
    worst = std::max(worst, rel(R_product(f, r).value, std::tgamma(r)));
  }
  return within(worst, 1e-6);
}

Outcome stable_closed_form() {
  double worst = 0.0;
  for (double a : {0.3, 0.5, 0.7}) {
    const CatalogEntry e = stable_entry(a);
    for (double r : {0.5, 1.5, 2.0, 3.0, 5.0}) {
      const double R = std::pow(std::tgamma(r), a);
      const double I = std::pow(std::tgamma(r), 1.0 - a);
      worst = std::max({worst, rel(R_product(e.function, r).value, R),
                        rel(R_integral(e.function, *e.closed_kappa, r).value, R),
                        rel(I_product(e.function, r).value, I),
                        rel(I_integral(e.function, *e.closed_kappa, r).value, I)});
    }
  }
  return within(worst, 1e-5);
}

Outcome factorization_identity() {
  double worst = 0.0;
  for (const auto& e : catalog()) {
    for (double r : kGrid) {
      const double prod = I_product(e.function, r).value * R_product(e.function, r).value;
      worst = std::max(worst, rel(prod, std::tgamma(r)));
    }
  }
  return within(worst, 1e-5);
}

Outcome moment_identity() {
  double worst = 0.0;
  for (const auto& e : catalog()) {
    for (int n = 1; n <= 6; ++n) {
      // Products from the definitions, independent of moments_R / moments_I.
      double R = 1.0;
      double I = 1.0;
      for (int j = 1; j <= n; ++j) {
        R *= e.function(j);
        I *= j / e.function(j);
      }
      worst = std::max({worst, rel(R_product(e.function, n + 1.0).value, R),
                        rel(I_product(e.function, n + 1.0).value, I)});
    }
  }
  return within(worst, 1e-6);
}

Outcome route_cross_check() {
  double worst = 0.0;
  int entries = 0;
  for (const auto& e : catalog()) {
    if (!e.closed_kappa) continue;
    ++entries;
    for (double r : kGrid) {
      worst = std::max({worst,
                        rel(R_integral(e.function, *e.closed_kappa, r).value,
                            R_product(e.function, r).value),
                        rel(I_integral(e.function, *e.closed_kappa, r).value,
                            I_product(e.function, r).value)});
    }
  }
  Outcome o = within(worst, 1e-5);
  o.detail += " over " + std::to_string(entries) + " entries";
  return o;
}

Outcome classification_table() {
  std::string mismatches;
  auto expect = [&](const ClassificationReport& rep, const char* what, bool got, bool want) {
    if (got != want) mismatches += " " + rep.entry + ":" + what;
  };
  int checked = 0;
  for (const auto& e : catalog()) {
    const ClassificationReport rep = classify(e);
    const auto param = [&e](const char* k) {
      for (const auto& [key, v] : e.params) {
        if (key == k) return v;
      }
      return 0.0;
    };
    if (e.family == "stable" || e.family == "gamma") {
      expect(rep, "i_mid", rep.i_mid, true);
      expect(rep, "logI_sd", rep.logI_sd, true);
      expect(rep, "logR_sd", rep.logR_sd, true);
    } else if (e.family == "expcp") {
      expect(rep, "r_mid", rep.r_mid, true);
      expect(rep, "i_mid", rep.i_mid, true);
      expect(rep, "logI_sd", rep.logI_sd, true);
      expect(rep, "logR_sd", rep.logR_sd, true);
    } else if (e.family == "geomcp") {
      expect(rep, "i_mid", rep.i_mid, false);
    } else if (e.family == "rou") {
      const double a = param("alpha");
      const double mu = param("mu");
      expect(rep, "i_mid", rep.i_mid, true);
      expect(rep, "logI_sd", rep.logI_sd, true);
      const bool special = std::fabs(2.0 * mu * a - 1.0) < 1e-12 ||
                           std::fabs(2.0 * mu * (1.0 - a) - 1.0) < 1e-12;
      if (special) expect(rep, "logR_sd", rep.logR_sd, true);
    } else {
      continue;
    }
    ++checked;
  }
  return {mismatches.empty(),
          std::to_string(checked) + " entries" +
              (mismatches.empty() ? ", exact match" : ", mismatches:" + mismatches)};
}

Outcome urbanik_equivalence() {
  const auto grid = classification_grid();
  std::string mismatches;
  int n = 0;
  for (const auto& e : catalog()) {
    const KappaMeasure k = kappa_for(e);
    if (sm_le_pi(k, grid).pass != mid_check_I(k, grid).pass) mismatches += " " + e.id;
    ++n;
  }
  return {mismatches.empty(), std::to_string(n) + " entries" +
                                  (mismatches.empty() ? ", all agree" : ", differ:" + mismatches)};
}

Outcome conjugacy_swap() {
  double worst = 0.0;
  for (const auto& r : swap_check(stable_entry(0.3).function, kGrid)) {
    worst = std::max({worst, r.R_conj_vs_I, r.I_conj_vs_R});
  }
  return within(worst, 1e-5);
}

Outcome monte_carlo() {
  const CatalogEntry e = expcp_entry(1.0);
  mc::SimulationOptions o;
  o.n_samples = 100000;
  o.dl = 1e-3;
  o.L = mc::default_horizon(e.function, o.dl);
  const double rs[] = {2.0, 3.0};
  const double exact[] = {2.0, 6.0};
  const auto est = mc::estimate_mellin_I(mc::model_for(e), rs, o);
  bool pass = std::exp(-o.L / 2.0) < 1e-6;
  std::string detail = "L=" + num(o.L);
  for (std::size_t i = 0; i < 2; ++i) {
    const double band = 3.0 * est[i].std_error + est[i].bias_bound;
    const double dev = std::fabs(est[i].mean - exact[i]);
    pass = pass && dev <= band;
    detail += "; E[I^" + std::to_string(i + 1) + "]=" + num(est[i].mean) + " |dev| " + num(dev) +
              " band " + num(band);
  }
  return {pass, detail};
}

Outcome convolution_residuals() {
  const double grid[] = {0.25, 0.5, 1.0, 2.0};
  double worst = 0.0;
  for (double c : {1.0, 2.0}) {
    const CatalogEntry e = expcp_entry(c);
    for (auto eq : {ConvolutionEq::theta_eq25, ConvolutionEq::eta_eq26}) {
      for (double r : convolution_residual(e, eq, grid)) worst = std::max(worst, r);
    }
  }
  return {worst <= 1e-3, "max residual " + num(worst) + " (tol 0.001)"};
}

// Gamma(r) (1 + eps sin^2(pi r)) satisfies v(1) = 1 and v(r+1) = r v(r) but
// is not log-convex. Random eps, window and spacing; every case must be caught
// while Gamma itself is accepted on the same grids.
Outcome bohr_mollerup() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> eps_dist(0.05, 2.0);
  std::uniform_real_distribution<double> start_dist(0.5, 3.0);
  std::uniform_real_distribution<double> step_dist(0.02, 0.1);
  const int cases = 200;
  int caught = 0;
  int gamma_ok = 0;
  int conditions_ok = 0;
  for (int i = 0; i < cases; ++i) {
    const double eps = eps_dist(rng);
    const double start = start_dist(rng);
    const double step = step_dist(rng);
    auto v = [eps](double r) {
      const double s = std::sin(std::numbers::pi * r);
      return std::tgamma(r) * (1.0 + eps * s * s);
    };
    if (std::fabs(v(1.0) - 1.0) < 1e-12 && rel(v(start + 1.0), start * v(start)) < 1e-12) {
      ++conditions_ok;
    }
    std::vector<std::pair<double, double>> perturbed;
    std::vector<std::pair<double, double>> plain;
    const int points = static_cast<int>(std::ceil(2.0 / step)) + 1;
    for (int k = 0; k < points; ++k) {
      const double r = start + step * k;
      perturbed.emplace_back(r, v(r));
      plain.emplace_back(r, std::tgamma(r));
    }
    if (!check_logconvex(perturbed)) ++caught;
    if (check_logconvex(plain)) ++gamma_ok;
  }
  const bool pass = caught == cases && gamma_ok == cases && conditions_ok == cases;
  return {pass, std::to_string(caught) + "/" + std::to_string(cases) + " perturbations caught, " +
                    std::to_string(gamma_ok) + "/" + std::to_string(cases) + " Gamma accepted"};
}

Outcome q_products() {
  double worst = 0.0;
  for (double c : {0.0, 0.1}) {
    const CatalogEntry e = geomcp_entry(c, 0.5);
    for (double r : {1.5, 2.0, 3.0}) {
      worst = std::max({worst, rel(R_product(e.function, r).value, geomcp_R_qproduct(c, 0.5, r)),
                        rel(I_product(e.function, r).value, geomcp_I_qproduct(c, 0.5, r))});
    }
  }
  return within(worst, 1e-6);
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
  double time_limit;  // seconds; 0 for none
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "gamma reduction", gamma_reduction, 1.0},
      {2, "stable closed form", stable_closed_form, 10.0},
      {3, "factorization identity", factorization_identity, 0.0},
      {4, "moment identity", moment_identity, 0.0},
      {5, "route cross-check", route_cross_check, 0.0},
      {6, "classification table", classification_table, 0.0},
      {7, "urbanik equivalence", urbanik_equivalence, 0.0},
      {8, "conjugacy swap", conjugacy_swap, 0.0},
      {9, "monte carlo", monte_carlo, 120.0},
      {10, "convolution residuals", convolution_residuals, 0.0},
      {11, "bohr-mollerup negative test", bohr_mollerup, 0.0},
      {12, "geometric q-products", q_products, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      o.pass = false;
      o.detail += "; over time limit " + num(c.time_limit) + " s";
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
