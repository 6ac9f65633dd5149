#include "perpetua/mellin.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "perpetua/errors.hpp"
#include "perpetua/special.hpp"

namespace perpetua {

namespace {

constexpr double kLogMax = 709.0;  // log(DBL_MAX) rounded down
constexpr int kRichardsonColumns = 4;

// Neumaier compensated sum; the product length reaches 2^20.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

double checked_exp(double log_value, const char* what) {
  if (log_value > kLogMax || log_value < -745.0 || !std::isfinite(log_value)) {
    throw OverflowError(std::string(what) + ": log value outside double range", log_value);
  }
  return std::exp(log_value);
}

double log_phi(const BernsteinFunction& f, double s) {
  const double v = f(s);
  if (!(v > 0.0)) throw DomainError(f.name() + ": Phi(s) must be > 0 for s > 0");
  return std::log(v);
}

// Splits r into r0 in (0, 1] and the number of unit lifts.
std::pair<double, int> reduce(double r) {
  double r0 = r - std::floor(r);
  int lifts = static_cast<int>(std::floor(r));
  if (r0 == 0.0) {
    r0 = 1.0;
    --lifts;
  }
  return {r0, lifts};
}

// int_a^b log Phi over an interval of length <= 1 far from the origin, where
// log Phi is smooth on a scale of n.
double integrate_log_phi(const BernsteinFunction& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 10>::integrate(
      [&f](double x) { return log_phi(f, x); }, a, b);
}

// Tail  sum_{j >= n} b_j  of the limit product, with the concavity gap
//   b_j = r0 l(j+1) + (1-r0) l(j) - l(j+r0),  l = log Phi,
// summed by Euler-Maclaurin: int_n^inf b + b(n)/2 - b'(n)/12. The integral
// telescopes to int_n^{n+r0} l - r0 int_n^{n+1} l.
double tail_correction(const BernsteinFunction& f, double r0, double n) {
  auto gap = [&](double j) {
    return r0 * log_phi(f, j + 1.0) + (1.0 - r0) * log_phi(f, j) - log_phi(f, j + r0);
  };
  const double integral = integrate_log_phi(f, n, n + r0) - r0 * integrate_log_phi(f, n, n + 1.0);
  const double slope = (gap(n + 0.5) - gap(n - 0.5));
  return integral + 0.5 * gap(n) - slope / 12.0;
}

struct LimitProduct {
  double log_value = 0.0;
  long n_terms = 0;
  double gap = 0.0;
};

// lim log h(n, r0) with sign +1, or its reciprocal with sign -1:
//   sign * ( sum_{j<n} [log Phi(j+1) - log Phi(j+r0)] + (r0-1) log Phi(n) ).
// The raw sequence converges like l'(n), which for slowly varying Phi is too
// slow to reach tight tolerances. An Euler-Maclaurin estimate of the tail is
// added first; the remaining error is then reduced by Richardson
// extrapolation over doublings of n.
LimitProduct limit_product(const BernsteinFunction& f, double r0, double sign,
                           const ProductOptions& opt, const char* what) {
  LimitProduct out;
  if (r0 == 1.0) return out;

  CompensatedSum acc;
  long done = 0;
  std::vector<std::array<double, kRichardsonColumns + 1>> table;
  double prev_best = 0.0;
  double gap = INFINITY;
  for (long n = 8;; n *= 2) {
    for (long j = done; j < n; ++j) {
      acc.add(log_phi(f, j + 1.0));
      acc.add(-log_phi(f, j + r0));
    }
    done = n;
    const double nd = static_cast<double>(n);
    const double raw =
        sign * (acc.value() + (r0 - 1.0) * log_phi(f, nd) + tail_correction(f, r0, nd));

    const std::size_t k = table.size();
    std::array<double, kRichardsonColumns + 1> row{};
    row[0] = raw;
    const std::size_t cols = std::min<std::size_t>(k, kRichardsonColumns);
    for (std::size_t m = 1; m <= cols; ++m) {
      row[m] = row[m - 1] + (row[m - 1] - table[k - 1][m - 1]) / (std::ldexp(1.0, int(m)) - 1.0);
    }
    table.push_back(row);
    const double best = row[cols];

    if (k >= 2) {
      gap = std::fabs(std::expm1(best - prev_best));
      if (gap < opt.tol) {
        out.log_value = best;
        out.n_terms = n;
        out.gap = gap;
        return out;
      }
    }
    prev_best = best;
    if (2 * n > opt.max_terms) {
      throw NonConvergenceError(std::string(what) + ": no convergence within " +
                                    std::to_string(n) + " terms",
                                std::exp(best), gap);
    }
  }
}

}  // namespace

std::string_view to_string(MellinMethod m) {
  switch (m) {
    case MellinMethod::product: return "product";
    case MellinMethod::integral: return "integral";
    case MellinMethod::closed_form: return "closed_form";
    case MellinMethod::gamma_ratio: return "gamma_ratio";
  }
  return "product";
}

double moments_I(const BernsteinFunction& f, int n) {
  if (n < 1) throw DomainError("moments_I requires n >= 1");
  double log_value = 0.0;
  for (int j = 1; j <= n; ++j) log_value += std::log(double(j)) - log_phi(f, j);
  return checked_exp(log_value, "moments_I");
}

double moments_R(const BernsteinFunction& f, int n) {
  if (n < 1) throw DomainError("moments_R requires n >= 1");
  double log_value = 0.0;
  for (int j = 1; j <= n; ++j) log_value += log_phi(f, j);
  return checked_exp(log_value, "moments_R");
}

MellinResult R_product(const BernsteinFunction& f, double r, const ProductOptions& opt) {
  if (!(r > 0.0)) throw DomainError("R_product requires r > 0");
  if (!(opt.tol > 0.0)) throw DomainError("R_product requires tol > 0");
  MellinResult out;
  out.r = r;
  out.method = MellinMethod::product;
  if (r == 1.0) return out;

  const auto [r0, lifts] = reduce(r);
  const LimitProduct lp = limit_product(f, r0, 1.0, opt, "R_product");
  double log_value = lp.log_value;
  for (int i = 0; i < lifts; ++i) log_value += log_phi(f, r0 + i);
  out.value = checked_exp(log_value, "R_product");
  out.n_terms = lp.n_terms;
  out.err_estimate = lp.gap;
  return out;
}

MellinResult I_gamma_ratio(const BernsteinFunction& f, double r, const ProductOptions& opt) {
  MellinResult R = R_product(f, r, opt);
  MellinResult out = R;
  out.method = MellinMethod::gamma_ratio;
  if (r == 1.0) return out;
  out.value = checked_exp(log_gamma(r) - std::log(R.value), "I_gamma_ratio");
  return out;
}

MellinResult I_product(const BernsteinFunction& f, double r, const ProductOptions& opt) {
  if (!(r > 0.0)) throw DomainError("I_product requires r > 0");
  if (!(opt.tol > 0.0)) throw DomainError("I_product requires tol > 0");
  MellinResult out;
  out.r = r;
  out.method = MellinMethod::product;
  if (r == 1.0) return out;

  const auto [r0, lifts] = reduce(r);
  const LimitProduct lp = limit_product(f, r0, -1.0, opt, "I_product");
  double log_value = log_gamma(r0) + lp.log_value;
  for (int i = 0; i < lifts; ++i) log_value += std::log(r0 + i) - log_phi(f, r0 + i);
  out.value = checked_exp(log_value, "I_product");
  out.n_terms = lp.n_terms;
  out.err_estimate = lp.gap;

  const MellinResult ratio = I_gamma_ratio(f, r, opt);
  const double gap = std::fabs(out.value / ratio.value - 1.0);
  if (gap > 10.0 * opt.tol) {
    throw ConsistencyError("I_product and Gamma(r)/R(r) disagree", out.value, ratio.value);
  }
  return out;
}

std::vector<double> product_sequence(const BernsteinFunction& f, double r0, int doublings) {
  if (!(r0 > 0.0 && r0 <= 1.0)) throw DomainError("product_sequence requires r0 in (0, 1]");
  std::vector<double> out;
  CompensatedSum acc;
  long done = 0;
  for (int d = 0; d <= doublings; ++d) {
    const long n = 1L << d;
    for (long j = done; j < n; ++j) {
      acc.add(log_phi(f, j + 1.0));
      acc.add(-log_phi(f, j + r0));
    }
    done = n;
    out.push_back(std::exp(acc.value() + (r0 - 1.0) * log_phi(f, double(n))));
  }
  return out;
}

std::vector<FunctionalResidual> check_functional_eqs(const BernsteinFunction& f,
                                                     std::span<const double> grid,
                                                     const ProductOptions& opt) {
  std::vector<FunctionalResidual> out;
  out.reserve(grid.size());
  for (double r : grid) {
    const double phi_r = f(r);
    const double R0 = R_product(f, r, opt).value;
    const double R1 = R_product(f, r + 1.0, opt).value;
    const double I0 = I_product(f, r, opt).value;
    const double I1 = I_product(f, r + 1.0, opt).value;
    out.push_back({r, std::fabs(R1 / (phi_r * R0) - 1.0), std::fabs(I1 * phi_r / (r * I0) - 1.0)});
  }
  return out;
}

bool check_logconvex(std::span<const std::pair<double, double>> values, double tol) {
  if (values.size() < 3) throw ShapeError("check_logconvex needs at least three points");
  const double step = values[1].first - values[0].first;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i].second > 0.0)) throw ShapeError("check_logconvex needs v > 0");
    if (i == 0) continue;
    const double d = values[i].first - values[i - 1].first;
    if (!(d > 0.0)) throw ShapeError("check_logconvex needs strictly increasing r");
    if (std::fabs(d - step) > 1e-9 * std::fabs(step)) {
      throw ShapeError("check_logconvex needs uniformly spaced r");
    }
  }
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double d2 = std::log(values[i + 1].second) - 2.0 * std::log(values[i].second) +
                      std::log(values[i - 1].second);
    if (d2 < -tol) return false;
  }
  return true;
}

}  // namespace perpetua
