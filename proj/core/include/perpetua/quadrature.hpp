#pragma once

#include <functional>

namespace perpetua::quad {

using Integrand = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
  double l1 = 0.0;     // integral of |f|
};

/// Double-exponential (tanh-sinh) quadrature on a finite interval.
/// Integrable endpoint singularities are allowed; non-finite integrand values
/// at nodes that crowd an endpoint are dropped (their weights underflow).
QuadResult integrate(const Integrand& f, double a, double b, double rel_tol = 1e-12);

/// exp-sinh quadrature on [a, +inf).
QuadResult integrate_to_infinity(const Integrand& f, double a, double rel_tol = 1e-12);

/// Integral over (0, +inf) split at `split`: tanh-sinh on (0, split],
/// exp-sinh on [split, +inf).
QuadResult integrate_half_line(const Integrand& f, double split = 1.0, double rel_tol = 1e-12);

/// Throws QuadratureError when `r.error > abs_tol`, SingularInputError when
/// the value is not finite.
void require(const QuadResult& r, double abs_tol, const char* what);

}  // namespace perpetua::quad
