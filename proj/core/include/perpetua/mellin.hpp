#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "perpetua/bernstein.hpp"

namespace perpetua {

enum class MellinMethod { product, integral, closed_form, gamma_ratio };

std::string_view to_string(MellinMethod m);

/// Value of R(r) = E[R^{r-1}] or I(r) = E[I^{r-1}].
struct MellinResult {
  double r = 1.0;
  double value = 1.0;
  MellinMethod method = MellinMethod::product;
  long n_terms = 0;          // product length or quadrature evaluations
  double err_estimate = 0.0;
};

struct ProductOptions {
  double tol = 1e-8;
  long max_terms = 1L << 20;
};

/// E[I^n] = n! / (Phi(1) ... Phi(n)), accumulated in log space.
double moments_I(const BernsteinFunction& f, int n);

/// E[R^n] = Phi(1) ... Phi(n), accumulated in log space.
double moments_R(const BernsteinFunction& f, int n);

/// R(r) from the limit product
///   h(n, r0) = prod_{j<n} Phi(j+1)/Phi(j+r0) * Phi(n)^{r0-1}
/// after reducing r to r0 in (0, 1] with R(r+1) = Phi(r) R(r).
///
/// n doubles from 8; the log-products are Richardson-extrapolated in 1/n
/// and iteration stops when successive extrapolants differ by less than tol
/// in ratio. err_estimate is that last gap. Throws NonConvergenceError at
/// max_terms.
MellinResult R_product(const BernsteinFunction& f, double r, const ProductOptions& opt = {});

/// I(r) = Gamma(r) * lim prod_{j<n} Phi(j+r0)/Phi(j+1) * Phi(n)^{1-r0}, lifted
/// with I(r+1) = r/Phi(r) I(r). Also evaluates Gamma(r)/R(r) and throws
/// ConsistencyError if the two differ by more than 10 tol.
MellinResult I_product(const BernsteinFunction& f, double r, const ProductOptions& opt = {});

/// I(r) = Gamma(r) / R(r) with R from R_product.
MellinResult I_gamma_ratio(const BernsteinFunction& f, double r, const ProductOptions& opt = {});

/// Raw (unextrapolated) h(n, r0) for n = 1, 2, 4, ..., 2^doublings.
std::vector<double> product_sequence(const BernsteinFunction& f, double r0, int doublings);

struct FunctionalResidual {
  double r = 0.0;
  double R_residual = 0.0;  // |R(r+1) / (Phi(r) R(r)) - 1|
  double I_residual = 0.0;  // |I(r+1) Phi(r) / (r I(r)) - 1|
};

std::vector<FunctionalResidual> check_functional_eqs(const BernsteinFunction& f,
                                                     std::span<const double> grid,
                                                     const ProductOptions& opt = {});

/// True iff the second differences of log v are >= -tol. Requires at least
/// three points, strictly increasing and uniformly spaced r, v > 0;
/// throws ShapeError otherwise.
bool check_logconvex(std::span<const std::pair<double, double>> values, double tol = 1e-9);

}  // namespace perpetua
