#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "cli.hpp"
#include "perpetua/conjugacy.hpp"
#include "perpetua/errors.hpp"
#include "perpetua/kappa_analysis.hpp"
#include "perpetua/mellin.hpp"
#include "perpetua/montecarlo.hpp"
#include "perpetua/serialize.hpp"
#include "perpetua/special.hpp"

namespace perpetua::cli {

namespace {

constexpr double kMellinGrid[] = {0.5, 1.5, 2.0, 3.0, 4.5};
constexpr double kConvolutionTol = 1e-3;

double rel(double a, double b) { return std::fabs(a / b - 1.0); }

class Suite {
 public:
  Suite(const CatalogEntry& entry, double tol) : entry_(entry), tol_(tol) {}

  // Records max residual against tol.
  void residual(const std::string& name, double worst, double tol) {
    lines_.push_back({entry_.id, name, worst <= tol,
                      "max residual " + format_number(worst) + " (tol " + format_number(tol) + ")"});
  }
  void residual(const std::string& name, double worst) { residual(name, worst, tol_); }

  void flag(const std::string& name, bool pass, std::string detail) {
    lines_.push_back({entry_.id, name, pass, std::move(detail)});
  }

  // Runs body; numerical exceptions become a failing line, missing inputs a skip.
  void guard(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const UnsupportedError&) {
    } catch (const std::exception& e) {
      lines_.push_back({entry_.id, name, false, e.what()});
    }
  }

  std::vector<CheckLine> take() { return std::move(lines_); }

 private:
  const CatalogEntry& entry_;
  double tol_;
  std::vector<CheckLine> lines_;
};

std::string bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

std::vector<CheckLine> verify_entry(const CatalogEntry& entry, const RunConfig& cfg) {
  Suite s(entry, cfg.tol);
  const BernsteinFunction& f = entry.function;
  const ProductOptions opt{std::min(1e-10, cfg.tol * 1e-2)};

  s.guard("bernstein_shape", [&] {
    const auto grid = log_grid(1e-3, 1e3, 61);
    s.flag("bernstein_shape", check_shape(f, grid).ok(), "null at 0, nondecreasing, concave");
  });

  if (f.levy()) {
    s.guard("levy_triple", [&] {
      const auto grid = log_grid(1e-2, 1e2, 13);
      s.residual("levy_triple", levy_consistency_gap(f, grid));
    });
  }

  s.guard("functional_equations", [&] {
    double worst = 0.0;
    for (const auto& r : check_functional_eqs(f, kMellinGrid, opt)) {
      worst = std::max({worst, r.R_residual, r.I_residual});
    }
    s.residual("functional_equations", worst);
  });

  s.guard("gamma_factorization", [&] {
    double worst = 0.0;
    for (double r : kMellinGrid) {
      const double prod = R_product(f, r, opt).value * I_product(f, r, opt).value;
      worst = std::max(worst, std::fabs(prod / std::exp(log_gamma(r)) - 1.0));
    }
    s.residual("gamma_factorization", worst);
  });

  s.guard("integer_moments", [&] {
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n) {
      worst = std::max(worst, rel(R_product(f, n + 1.0, opt).value, moments_R(f, n)));
      worst = std::max(worst, rel(I_product(f, n + 1.0, opt).value, moments_I(f, n)));
    }
    s.residual("integer_moments", worst);
  });

  s.guard("logconvex_R", [&] {
    std::vector<std::pair<double, double>> values;
    for (int i = 0; i <= 18; ++i) {
      const double r = 0.5 + 0.25 * i;
      values.emplace_back(r, R_product(f, r, opt).value);
    }
    s.flag("logconvex_R", check_logconvex(values), "log R convex on [0.5, 5]");
  });

  if (entry.closed_R || entry.closed_I) {
    s.guard("closed_forms", [&] {
      double worst = 0.0;
      for (double r : kMellinGrid) {
        if (entry.closed_R) worst = std::max(worst, rel(R_product(f, r, opt).value, entry.closed_R(r)));
        if (entry.closed_I) worst = std::max(worst, rel(I_product(f, r, opt).value, entry.closed_I(r)));
      }
      s.residual("closed_forms", worst);
    });
  }

  if (entry.family == "geomcp") {
    s.guard("q_products", [&] {
      double c = 0.0;
      double q = 0.0;
      for (const auto& [k, v] : entry.params) (k == "c" ? c : q) = v;
      double worst = 0.0;
      for (double r : {1.5, 2.0, 3.0}) {
        worst = std::max(worst, rel(R_product(f, r, opt).value, geomcp_R_qproduct(c, q, r)));
        worst = std::max(worst, rel(I_product(f, r, opt).value, geomcp_I_qproduct(c, q, r)));
      }
      s.residual("q_products", worst);
    });
  }

  if (entry.closed_kappa) {
    const KappaMeasure& kappa = *entry.closed_kappa;
    s.guard("kappa_laplace", [&] {
      s.residual("kappa_laplace", kappa_laplace_gap(f, kappa, kappa_check_grid()));
    });
    s.guard("integral_routes", [&] {
      double worst = 0.0;
      for (double r : kMellinGrid) {
        worst = std::max(worst, rel(R_integral(f, kappa, r).value, R_product(f, r, opt).value));
        worst = std::max(worst, rel(I_integral(f, kappa, r).value, I_product(f, r, opt).value));
      }
      s.residual("integral_routes", worst);
    });
  }

  s.guard("classification", [&] {
    const ClassificationReport rep = classify(entry);
    const auto& ex = entry.expected;
    std::string detail;
    bool pass = true;
    auto compare = [&](const char* name, const std::optional<bool>& want, bool got) {
      detail += std::string(detail.empty() ? "" : " ") + name + "=" + bool_text(got);
      if (want && *want != got) {
        pass = false;
        detail += "(expected " + bool_text(*want) + ")";
      }
    };
    compare("r_mid", ex.r_mid, rep.r_mid);
    compare("i_mid", ex.i_mid, rep.i_mid);
    compare("logR_sd", ex.logR_sd, rep.logR_sd);
    compare("logI_sd", ex.logI_sd, rep.logI_sd);
    s.flag("classification", pass, detail);

    const KappaMeasure kappa = kappa_for(entry);
    const auto grid = classification_grid();
    const bool mid = mid_check_I(kappa, grid).pass;
    const bool urbanik = sm_le_pi(kappa, grid).pass;
    s.flag("urbanik_equivalence", mid == urbanik,
           "mid_check_I=" + bool_text(mid) + " sm_le_pi=" + bool_text(urbanik));
  });

  s.guard("convolution", [&] {
    const double grid[] = {0.25, 0.5, 1.0, 2.0};
    for (auto eq : {ConvolutionEq::theta_eq25, ConvolutionEq::eta_eq26, ConvolutionEq::zeta_eq27}) {
      try {
        const auto res = convolution_residual(entry, eq, grid);
        s.residual("convolution_" + std::string(to_string(eq)),
                   *std::max_element(res.begin(), res.end()), kConvolutionTol);
      } catch (const UnsupportedError&) {
      }
    }
  });

  if (f.is_in_sigma() == Flag::yes) {
    s.guard("swap_check", [&] {
      double worst = 0.0;
      for (const auto& r : swap_check(f, kMellinGrid, opt)) {
        worst = std::max({worst, r.R_conj_vs_I, r.I_conj_vs_R});
      }
      s.residual("swap_check", worst);
    });
  }
  if (entry.potential) {
    s.guard("sigma_potential", [&] {
      const SigmaVerdict v = sigma_check(entry, std::nullopt);
      const bool want = f.is_in_sigma() == Flag::yes;
      s.flag("sigma_potential", v.in_sigma == want,
             "potential density says in_sigma=" + bool_text(v.in_sigma));
    });
  }

  if (cfg.monte_carlo) {
    s.guard("monte_carlo", [&] {
      const mc::SubordinatorModel model = mc::model_for(entry);
      mc::SimulationOptions o;
      o.n_samples = cfg.n;
      o.dl = cfg.dl;
      o.L = cfg.L;
      o.seed = cfg.seed;
      const double rs[] = {2.0, 3.0, 4.0};
      for (const auto& e : mc::estimate_mellin_I(model, rs, o)) {
        const double exact = I_product(f, e.r, opt).value;
        const double band = 3.0 * e.std_error + e.bias_bound;
        const int n = static_cast<int>(e.r) - 1;
        s.flag("monte_carlo_moment_" + std::to_string(n), std::fabs(e.mean - exact) <= band,
               "estimate " + format_number(e.mean) + " exact " + format_number(exact) +
                   " band " + format_number(band));
      }
    });
  }
  return s.take();
}

}  // namespace perpetua::cli
