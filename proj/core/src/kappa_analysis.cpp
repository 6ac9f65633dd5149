#include "perpetua/kappa_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "perpetua/errors.hpp"
#include "perpetua/quadrature.hpp"
#include "perpetua/special.hpp"

namespace perpetua {

namespace {

constexpr double kKernelSeriesCut = 1e-3;
constexpr double kDigammaSeriesCut = 1e-4;
constexpr double kLaplaceMatchTol = 1e-5;

double first_atom(const KappaMeasure& kappa) {
  double x = std::numeric_limits<double>::infinity();
  for (const Atom& a : kappa.atoms) x = std::min(x, a.location);
  return x;
}

// 1 / (e^x - 1) without overflow.
double inv_expm1(double x) { return std::exp(-x) / -std::expm1(-x); }

// Integral of the Mellin kernel against a density on (0, inf).
struct KernelIntegral {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
};

KernelIntegral kernel_integral(double r, const std::function<double(double)>& weight,
                               double tol, const char* what) {
  KernelIntegral out;
  long count = 0;
  const auto res = quad::integrate_half_line(
      [&](double x) {
        ++count;
        return mellin_kernel(r, x) * weight(x);
      },
      1.0, std::min(1e-10, tol));
  quad::require(res, std::max(tol, tol * std::fabs(res.value)), what);
  out.value = res.value;
  out.error = res.error;
  out.evaluations = count;
  return out;
}

void check_kappa(const KappaMeasure& kappa) {
  for (const Atom& a : kappa.atoms) {
    if (!(a.location > 0.0)) throw ValidationError(kappa.name + ": kappa has an atom at 0");
  }
}

double lambda_bar(const CatalogEntry& entry, double x) {
  if (entry.levy_tail) return entry.levy_tail(x);
  return entry.function.levy()->tail(x, 1e-13);
}

}  // namespace

// ---------------------------------------------------------------------------
// kappa

double kappa_laplace(const KappaMeasure& kappa, double s, double tol) {
  if (!(s > 0.0)) throw DomainError("kappa_laplace requires s > 0");
  double out = 0.0;
  for (const Atom& a : kappa.atoms) out += a.mass * std::exp(-s * a.location);
  if (kappa.has_density()) {
    const auto res = quad::integrate_half_line(
        [&](double x) { return std::exp(-s * x) * kappa.density(x); }, 1.0, tol);
    out += res.value;
  }
  return out;
}

double kappa_laplace_gap(const BernsteinFunction& f, const KappaMeasure& kappa,
                         std::span<const double> grid) {
  double gap = 0.0;
  for (double s : grid) {
    const double target = f.derivative(s) / f(s);
    gap = std::max(gap, std::fabs(kappa_laplace(kappa, s) / target - 1.0));
  }
  return gap;
}

std::vector<double> kappa_check_grid() { return {0.5, 1.0, 2.0, 5.0}; }

KappaMeasure kappa_for(const BernsteinFunction& f, const KappaMeasure& candidate) {
  check_kappa(candidate);
  const auto grid = kappa_check_grid();
  const double gap = kappa_laplace_gap(f, candidate, grid);
  if (!(gap <= kLaplaceMatchTol)) {
    throw ValidationError(candidate.name + ": Laplace transform of kappa misses Phi'/Phi by " +
                          std::to_string(gap));
  }
  return candidate;
}

KappaMeasure kappa_for(const CatalogEntry& entry) {
  if (!entry.closed_kappa) throw UnsupportedError(entry.id + " has no closed-form kappa");
  return kappa_for(entry.function, *entry.closed_kappa);
}

// ---------------------------------------------------------------------------
// Integral representations

double mellin_kernel(double r, double x) {
  const double t = r - 1.0;
  if (x < kKernelSeriesCut) {
    // Numerator and x (e^x - 1) expanded to fourth order; c_n = (t^n - t)/n!.
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t, t6 = t5 * t;
    const double c2 = (t2 - t) / 2.0;
    const double c3 = (t3 - t) / 6.0;
    const double c4 = (t4 - t) / 24.0;
    const double c5 = (t5 - t) / 120.0;
    const double c6 = (t6 - t) / 720.0;
    const double num = c2 - x * (c3 - x * (c4 - x * (c5 - x * c6)));
    const double den = 1.0 + x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x / 120.0)));
    return num / den;
  }
  // Numerator and denominator multiplied by e^{-x}.
  const double em1 = std::expm1(-x);
  const double num = (std::expm1(-r * x) - em1) - t * (std::expm1(-2.0 * x) - em1);
  return num / (x * -em1);
}

MellinResult R_integral(const BernsteinFunction& f, const KappaMeasure& kappa, double r,
                        double tol) {
  if (!(r > 0.0)) throw DomainError("R_integral requires r > 0");
  MellinResult out;
  out.r = r;
  out.method = MellinMethod::integral;
  if (r == 1.0) return out;

  double log_value = (r - 1.0) * std::log(f(1.0));
  for (const Atom& a : kappa.atoms) log_value += mellin_kernel(r, a.location) * a.mass;
  if (kappa.has_density()) {
    const auto ki = kernel_integral(r, kappa.density, tol, "R_integral");
    log_value += ki.value;
    out.err_estimate = ki.error;
    out.n_terms = ki.evaluations;
  }
  out.n_terms += static_cast<long>(kappa.atoms.size());
  out.value = std::exp(log_value);
  return out;
}

MellinResult I_integral(const BernsteinFunction& f, const KappaMeasure& kappa, double r,
                        double tol) {
  if (!(r > 0.0)) throw DomainError("I_integral requires r > 0");
  MellinResult out;
  out.r = r;
  out.method = MellinMethod::integral;
  if (r == 1.0) return out;

  double log_value = (1.0 - r) * std::log(f(1.0));
  for (const Atom& a : kappa.atoms) log_value -= mellin_kernel(r, a.location) * a.mass;
  const auto ki = kernel_integral(
      r, [&kappa](double x) { return kappa.one_minus_k(x); }, tol, "I_integral");
  log_value += ki.value;
  out.value = std::exp(log_value);
  out.err_estimate = ki.error;
  out.n_terms = ki.evaluations + static_cast<long>(kappa.atoms.size());

  const double via_R = gamma_fn(r) / R_integral(f, kappa, r, tol).value;
  if (std::fabs(out.value / via_R - 1.0) > 10.0 * tol) {
    throw ConsistencyError("I_integral and Gamma(r)/R_integral disagree", out.value, via_R);
  }
  return out;
}

double gamma_integral_rep(double r, double tol) {
  if (!(r > 0.0)) throw DomainError("gamma_integral_rep requires r > 0");
  if (r == 1.0) return 1.0;
  return std::exp(kernel_integral(r, [](double) { return 1.0; }, tol, "gamma_integral_rep").value);
}

double digamma_rep(double r, double tol) {
  if (!(r > 0.0)) throw DomainError("digamma_rep requires r > 0");
  auto f = [r](double x) {
    if (x < kDigammaSeriesCut) return (r - 1.5) + x * (5.0 / 12.0 + r / 2.0 - r * r / 2.0);
    return std::exp(-x) / x - std::exp(-r * x) / -std::expm1(-x);
  };
  const auto res = quad::integrate_half_line(f, 1.0, tol);
  quad::require(res, std::max(tol, tol * std::fabs(res.value)) * 10.0, "digamma_rep");
  return res.value;
}

// ---------------------------------------------------------------------------
// Classification

std::vector<double> classification_grid() { return log_grid(1e-4, 50.0, 200); }

GridCheck mid_check_I(const KappaMeasure& kappa, std::span<const double> grid, double tol) {
  GridCheck out;
  if (kappa.has_atoms()) {
    out.witnesses.push_back(first_atom(kappa));
    return out;
  }
  for (double x : grid) {
    if (kappa.k(x) > 1.0 + tol) out.witnesses.push_back(x);
  }
  out.pass = out.witnesses.empty();
  return out;
}

GridCheck sd_check_logR(const KappaMeasure& kappa, std::span<const double> grid, double tol) {
  GridCheck out;
  if (kappa.has_atoms()) {
    out.witnesses.push_back(first_atom(kappa));
    return out;
  }
  double prev = std::numeric_limits<double>::infinity();
  for (double x : grid) {
    const double j = kappa.k(x) * inv_expm1(x);
    if (j - prev > tol * std::fabs(prev)) out.witnesses.push_back(x);
    prev = j;
  }
  out.pass = out.witnesses.empty();
  return out;
}

GridCheck sd_check_logI(const KappaMeasure& kappa, std::span<const double> grid, double tol) {
  GridCheck out;
  if (kappa.has_atoms()) {
    out.witnesses.push_back(first_atom(kappa));
    return out;
  }
  double prev = std::numeric_limits<double>::infinity();
  for (double x : grid) {
    const double l = kappa.one_minus_k(x) * inv_expm1(x);
    if (l < -tol || l - prev > tol * std::fabs(prev)) out.witnesses.push_back(x);
    prev = l;
  }
  out.pass = out.witnesses.empty();
  return out;
}

ClassificationReport classify(const std::string& entry_id, const KappaMeasure& kappa,
                              std::span<const double> grid) {
  ClassificationReport rep;
  rep.entry = entry_id;
  auto record = [&rep](const char* name, const GridCheck& g) {
    for (double x : g.witnesses) rep.witnesses.push_back({name, x});
    return g.pass;
  };
  rep.i_mid = record("i_mid", mid_check_I(kappa, grid));
  rep.logR_sd = record("logR_sd", sd_check_logR(kappa, grid));
  rep.logI_sd = record("logI_sd", sd_check_logI(kappa, grid));
  return rep;
}

ClassificationReport classify(const CatalogEntry& entry) {
  const KappaMeasure kappa = kappa_for(entry);
  const auto grid = classification_grid();
  return classify(entry.id, kappa, grid);
}

HalfLineMeasure levy_measure_logR(const KappaMeasure& kappa) {
  HalfLineMeasure out;
  out.negative_axis = true;
  if (kappa.has_density()) {
    out.density = [kappa](double y) {
      const double x = -y;
      if (!(x > 0.0)) return 0.0;
      return kappa.k(x) * inv_expm1(x) / x;
    };
  }
  for (const Atom& a : kappa.atoms) {
    const double mass = a.mass * inv_expm1(a.location) / a.location;
    if (mass > 0.0) out.atoms.push_back({-a.location, mass});
  }
  return out;
}

HalfLineMeasure levy_measure_logI(const KappaMeasure& kappa) {
  if (kappa.has_atoms()) {
    throw PreconditionError(kappa.name + ": kappa has atoms, log I has no Levy density");
  }
  const auto grid = classification_grid();
  if (!mid_check_I(kappa, grid).pass) {
    throw PreconditionError(kappa.name + ": k exceeds 1, kappa is not dominated by dx");
  }
  HalfLineMeasure out;
  out.negative_axis = true;
  out.density = [kappa](double y) {
    const double x = -y;
    if (!(x > 0.0)) return 0.0;
    return kappa.one_minus_k(x) * inv_expm1(x) / x;
  };
  return out;
}

// ---------------------------------------------------------------------------
// Convolution equations

std::string_view to_string(ConvolutionEq which) {
  switch (which) {
    case ConvolutionEq::theta_eq25: return "theta";
    case ConvolutionEq::eta_eq26: return "eta";
    case ConvolutionEq::zeta_eq27: return "zeta";
  }
  return "theta";
}

double ConvolutionSides::residual() const { return std::fabs(lhs - rhs); }

std::vector<ConvolutionSides> convolution_sides(const CatalogEntry& entry, ConvolutionEq which,
                                                std::span<const double> grid, double tol) {
  const auto& levy = entry.function.levy();
  if (levy && levy->drift() != 0.0) {
    throw UnsupportedError(entry.id + ": convolution equations need zero drift");
  }
  const bool needs_tail = which != ConvolutionEq::zeta_eq27;
  if (needs_tail && !entry.levy_tail && !levy) {
    throw UnsupportedError(entry.id + ": no Levy tail available");
  }
  if (!levy && !entry.levy_tail) {
    throw UnsupportedError(entry.id + ": drift unknown");
  }

  const DensityFunction* lhs_fn = nullptr;
  const DensityFunction* kernel_fn = nullptr;
  std::function<double(double)> weight;
  bool jacobian = true;  // factor v e^x from dy = v e^x dx
  switch (which) {
    case ConvolutionEq::theta_eq25:
      if (!entry.density_I) throw UnsupportedError(entry.id + ": no closed-form density of I");
      lhs_fn = kernel_fn = &*entry.density_I;
      weight = [&entry](double x) { return lambda_bar(entry, x); };
      break;
    case ConvolutionEq::eta_eq26:
      if (!entry.survival_R || !entry.density_R) {
        throw UnsupportedError(entry.id + ": no closed-form law of R");
      }
      lhs_fn = &*entry.survival_R;
      kernel_fn = &*entry.density_R;
      weight = [&entry](double x) { return lambda_bar(entry, x); };
      jacobian = false;  // the 1/R factor cancels it
      break;
    case ConvolutionEq::zeta_eq27:
      if (!entry.density_R) throw UnsupportedError(entry.id + ": no closed-form density of R");
      if (!entry.potential || entry.potential->point_mass_b != 0.0 || !entry.potential->h) {
        throw UnsupportedError(entry.id + ": potential measure has no density");
      }
      lhs_fn = kernel_fn = &*entry.density_R;
      weight = [&entry](double x) { return entry.potential->eval_h(x); };
      break;
  }

  std::vector<ConvolutionSides> out;
  for (double v : grid) {
    if (!(v > 0.0)) throw DomainError("convolution equations need v > 0");
    ConvolutionSides side;
    side.v = v;
    side.lhs = (*lhs_fn)(v);
    auto integrand = [&](double x) {
      const double y = v * std::exp(x);
      const double val = (*kernel_fn)(y) * weight(x);
      return jacobian ? val * y : val;
    };
    // y = v e^x stays inside the support (lo, hi) for x < log(hi / v).
    const double hi = kernel_fn->hi;
    if (std::isfinite(hi)) {
      side.rhs = v < hi ? quad::integrate(integrand, 0.0, std::log(hi / v), tol).value : 0.0;
    } else {
      side.rhs = quad::integrate_half_line(integrand, 1.0, tol).value;
    }
    out.push_back(side);
  }
  return out;
}

std::vector<double> convolution_residual(const CatalogEntry& entry, ConvolutionEq which,
                                         std::span<const double> grid, double tol) {
  std::vector<double> out;
  for (const auto& s : convolution_sides(entry, which, grid, tol)) out.push_back(s.residual());
  return out;
}

// ---------------------------------------------------------------------------
// Urbanik bridge

HalfLineMeasure urbanik_S(const KappaMeasure& kappa) {
  HalfLineMeasure out;
  if (kappa.has_density()) {
    out.density = [kappa](double x) {
      if (!(x > 0.0)) return 0.0;
      return -std::expm1(-x) * std::exp(-x) / x * kappa.k(x);
    };
  }
  for (const Atom& a : kappa.atoms) {
    const double x = a.location;
    const double mass = -std::expm1(-x) * std::exp(-x) / x * a.mass;
    if (mass > 0.0) out.atoms.push_back({x, mass});
  }
  return out;
}

double urbanik_pi(double x) {
  if (!(x > 0.0)) return 0.0;
  return std::exp(-x) * -std::expm1(-x) / x;
}

GridCheck sm_le_pi(const KappaMeasure& kappa, std::span<const double> grid, double tol) {
  GridCheck out;
  const HalfLineMeasure sm = urbanik_S(kappa);
  if (!sm.atoms.empty()) {
    out.witnesses.push_back(sm.atoms.front().location);
    return out;
  }
  for (double x : grid) {
    if (sm.eval_density(x) > urbanik_pi(x) * (1.0 + tol)) out.witnesses.push_back(x);
  }
  out.pass = out.witnesses.empty();
  return out;
}

}  // namespace perpetua
