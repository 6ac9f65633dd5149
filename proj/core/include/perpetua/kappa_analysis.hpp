#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perpetua/bernstein.hpp"
#include "perpetua/catalog.hpp"
#include "perpetua/measures.hpp"
#include "perpetua/mellin.hpp"

namespace perpetua {

// ---------------------------------------------------------------------------
// kappa and its Laplace transform

/// Laplace transform of kappa at s > 0 (density by quadrature, atoms summed).
double kappa_laplace(const KappaMeasure& kappa, double s, double tol = 1e-12);

/// Max relative gap |L kappa(s) / (Phi'(s)/Phi(s)) - 1| over `grid`.
double kappa_laplace_gap(const BernsteinFunction& f, const KappaMeasure& kappa,
                         std::span<const double> grid);

/// Grid on which the Laplace-match invariant is enforced: {0.5, 1, 2, 5}.
std::vector<double> kappa_check_grid();

/// The entry's closed-form kappa after checking its Laplace match to 1e-5.
/// Throws UnsupportedError if the entry has none, ValidationError on mismatch.
KappaMeasure kappa_for(const CatalogEntry& entry);

/// Validate a caller-supplied candidate kappa for f.
KappaMeasure kappa_for(const BernsteinFunction& f, const KappaMeasure& candidate);

// ---------------------------------------------------------------------------
// Integral representations

/// (e^{-(r-1)x} - 1 - (r-1)(e^{-x} - 1)) / (x (e^x - 1)), with a series
/// below x = 1e-3.
double mellin_kernel(double r, double x);

/// R(r) = Phi(1)^{r-1} exp( int kernel(r, x) kappa(dx) ).
MellinResult R_integral(const BernsteinFunction& f, const KappaMeasure& kappa, double r,
                        double tol = 1e-10);

/// I(r) = Phi(1)^{1-r} exp( int kernel(r, x) (dx - kappa(dx)) ), checked
/// against Gamma(r) / R_integral; ConsistencyError beyond 10 tol.
MellinResult I_integral(const BernsteinFunction& f, const KappaMeasure& kappa, double r,
                        double tol = 1e-10);

/// Gamma(r) from exp( int kernel(r, x) dx ).
double gamma_integral_rep(double r, double tol = 1e-12);

/// Gamma'(r)/Gamma(r) = int_0^inf (e^{-x}/x - e^{-rx}/(1 - e^{-x})) dx.
double digamma_rep(double r, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Classification

/// Outcome of a grid check; `witnesses` are the grid points where it fails.
struct GridCheck {
  bool pass = false;
  std::vector<double> witnesses;
};

/// Geometric grid of 200 points on [1e-4, 50].
std::vector<double> classification_grid();

/// I is m.i.d. iff kappa(dx) <= dx: no atoms and k <= 1 + tol on the grid.
GridCheck mid_check_I(const KappaMeasure& kappa, std::span<const double> grid,
                      double tol = 1e-9);

/// log R self-decomposable iff (e^x - 1)^{-1} k(x) is nonincreasing.
GridCheck sd_check_logR(const KappaMeasure& kappa, std::span<const double> grid,
                        double tol = 1e-9);

/// log I self-decomposable iff (e^x - 1)^{-1} (1 - k(x)) is nonnegative and
/// nonincreasing.
GridCheck sd_check_logI(const KappaMeasure& kappa, std::span<const double> grid,
                        double tol = 1e-9);

struct ClassificationWitness {
  std::string check;
  double x = 0.0;
};

struct ClassificationReport {
  std::string entry;
  bool r_mid = true;  // R is always m.i.d.
  bool i_mid = false;
  bool logR_sd = false;
  bool logI_sd = false;
  std::string method = "numeric-grid";
  std::vector<ClassificationWitness> witnesses;
};

ClassificationReport classify(const std::string& entry_id, const KappaMeasure& kappa,
                              std::span<const double> grid);
ClassificationReport classify(const CatalogEntry& entry);

/// Levy measure of log R: image under x -> -x of x^{-1} (e^x - 1)^{-1} kappa(dx).
HalfLineMeasure levy_measure_logR(const KappaMeasure& kappa);

/// Levy measure of log I (requires kappa <= dx): density on y < 0 equal to
/// (1 - k(-y)) / (|y| (e^{|y|} - 1)). Throws PreconditionError for atoms or
/// k > 1 on the classification grid.
HalfLineMeasure levy_measure_logI(const KappaMeasure& kappa);

// ---------------------------------------------------------------------------
// Convolution equations satisfied by the laws of I and R (zero drift)

enum class ConvolutionEq { theta_eq25, eta_eq26, zeta_eq27 };

std::string_view to_string(ConvolutionEq which);

struct ConvolutionSides {
  double v = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual() const;
};

/// Left and right sides of the chosen equation on `grid`; right sides by
/// quadrature. Throws UnsupportedError when the drift is nonzero or the
/// needed closed forms are absent.
std::vector<ConvolutionSides> convolution_sides(const CatalogEntry& entry, ConvolutionEq which,
                                                std::span<const double> grid,
                                                double tol = 1e-10);

std::vector<double> convolution_residual(const CatalogEntry& entry, ConvolutionEq which,
                                         std::span<const double> grid, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Urbanik S-transform bridge

/// SM(dx) = (1 - e^{-x}) x^{-1} e^{-x} kappa(dx).
HalfLineMeasure urbanik_S(const KappaMeasure& kappa);

/// Density e^{-x} (1 - e^{-x}) / x of the representing measure of the gamma
/// process.
double urbanik_pi(double x);

/// SM <= Pi: no atoms and SM density <= Pi density (1 + tol) on the grid.
GridCheck sm_le_pi(const KappaMeasure& kappa, std::span<const double> grid, double tol = 1e-9);

}  // namespace perpetua
