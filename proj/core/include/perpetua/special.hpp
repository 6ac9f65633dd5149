#pragma once

namespace perpetua {

/// Gamma function for r > 0. Throws DomainError otherwise.
double gamma_fn(double r);

/// log Gamma(r) for r > 0. Thread-safe (no signgam).
double log_gamma(double r);

/// Gamma'(r)/Gamma(r) for r > 0.
double digamma(double r);

/// Regularised incomplete gamma functions P(a, x) and Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// Gamma(x) / Gamma(x + delta) for x > 0, x + delta > 0, without forming
/// either Gamma value.
double gamma_ratio(double x, double delta);

/// Exponential integral E_1(x) = int_x^inf e^{-t}/t dt for x > 0.
double expint_e1(double x);

inline constexpr double kEulerGamma = 0.57721566490153286061;

}  // namespace perpetua
