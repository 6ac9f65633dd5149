#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perpetua/bernstein.hpp"
#include "perpetua/catalog.hpp"
#include "perpetua/measures.hpp"
#include "perpetua/mellin.hpp"

namespace perpetua {

/// Shape requirements on rho = b delta_0 + h dx: h nonincreasing on a grid
/// and decaying to 0.
struct PotentialShape {
  bool nonincreasing = false;
  bool vanishes_at_infinity = false;
  bool ok() const { return nonincreasing && vanishes_at_infinity; }
};

/// h is checked on a geometric grid over [1e-3, 50]; h -> 0 holds if
/// h(50) < 1e-6 h(1) or h == 0, or, for slowly (e.g. power-law) decaying h,
/// if every decade from 1e2 to 1e8 shrinks h by at least 0.1%.
PotentialShape check_potential_shape(const PotentialDensity& rho);

/// Max relative gap between b + int e^{-sx} h(x) dx and 1/Phi(s) on `grid`.
double potential_laplace_gap(const BernsteinFunction& f, const PotentialDensity& rho,
                             std::span<const double> grid);

enum class SigmaEvidence { flag, potential_density };

struct SigmaVerdict {
  bool in_sigma = false;
  SigmaEvidence evidence = SigmaEvidence::flag;
};

/// Membership of the entry's Phi in Sigma.
///
/// With a potential density (argument, else the entry's own closed form):
/// its Laplace transform must equal 1/Phi on {0.5, 1, 2, 5} to 1e-5
/// (ValidationError otherwise); the answer is then whether h is decreasing
/// to 0. Without one, the entry's flag is returned; UnsupportedError if it is
/// unknown.
SigmaVerdict sigma_check(const CatalogEntry& entry,
                         const std::optional<PotentialDensity>& rho = std::nullopt);

/// Phi*(s) = b s - int (1 - e^{-sx}) dh(x), evaluated after integration by
/// parts as b s + s int e^{-sx} h(x) dx. Throws SingularInputError if
/// int_0^1 h diverges.
BernsteinFunction conjugate_bernstein_of_h(double b, const PotentialDensity& h);

struct SwapResidual {
  double r = 0.0;
  double R_conj_vs_I = 0.0;  // |R_{Phi*}(r) / I_Phi(r) - 1|
  double I_conj_vs_R = 0.0;  // |I_{Phi*}(r) / R_Phi(r) - 1|
};

/// Mellin swap between Phi and its conjugate. PreconditionError unless Phi
/// is flagged in Sigma.
std::vector<SwapResidual> swap_check(const BernsteinFunction& f, std::span<const double> grid,
                                     const ProductOptions& opt = {});

}  // namespace perpetua
