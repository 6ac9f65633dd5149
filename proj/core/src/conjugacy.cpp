#include "perpetua/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perpetua/errors.hpp"
#include "perpetua/quadrature.hpp"

namespace perpetua {

namespace {

constexpr double kMatchTol = 1e-5;
constexpr double kShapeTol = 1e-9;

double laplace_h(const PotentialDensity& rho, double s) {
  if (!rho.h) return 0.0;
  return quad::integrate_half_line([&](double x) { return std::exp(-s * x) * rho.h(x); }, 1.0,
                                   1e-12)
      .value;
}

}  // namespace

PotentialShape check_potential_shape(const PotentialDensity& rho) {
  PotentialShape out;
  if (!rho.h) {
    out.nonincreasing = true;
    out.vanishes_at_infinity = true;
    return out;
  }
  out.nonincreasing = true;
  double prev = 0.0;
  bool first = true;
  for (double x : log_grid(1e-3, 50.0, 200)) {
    const double v = rho.h(x);
    if (v < 0.0 || (!first && v > prev * (1.0 + kShapeTol))) out.nonincreasing = false;
    prev = v;
    first = false;
  }

  const double h1 = rho.h(1.0);
  const double h50 = rho.h(50.0);
  if (h50 == 0.0 || h50 < 1e-6 * h1) {
    out.vanishes_at_infinity = true;
    return out;
  }
  // Power-law decay: every decade must shrink h by a fixed fraction.
  bool shrinking = true;
  for (int d = 2; d < 8; ++d) {
    const double a = rho.h(std::pow(10.0, d));
    const double b = rho.h(std::pow(10.0, d + 1));
    if (!(b <= (1.0 - 1e-3) * a)) shrinking = false;
  }
  out.vanishes_at_infinity = shrinking;
  return out;
}

double potential_laplace_gap(const BernsteinFunction& f, const PotentialDensity& rho,
                             std::span<const double> grid) {
  double gap = 0.0;
  for (double s : grid) {
    const double lhs = rho.point_mass_b + laplace_h(rho, s);
    gap = std::max(gap, std::fabs(lhs * f(s) - 1.0));
  }
  return gap;
}

SigmaVerdict sigma_check(const CatalogEntry& entry, const std::optional<PotentialDensity>& rho) {
  const std::optional<PotentialDensity>& pot = rho ? rho : entry.potential;
  if (pot) {
    const std::vector<double> grid{0.5, 1.0, 2.0, 5.0};
    const double gap = potential_laplace_gap(entry.function, *pot, grid);
    if (!(gap <= kMatchTol)) {
      throw ValidationError(entry.id + ": Laplace transform of rho misses 1/Phi by " +
                            std::to_string(gap));
    }
    return {check_potential_shape(*pot).ok(), SigmaEvidence::potential_density};
  }
  switch (entry.function.is_in_sigma()) {
    case Flag::yes: return {true, SigmaEvidence::flag};
    case Flag::no: return {false, SigmaEvidence::flag};
    case Flag::unknown: break;
  }
  throw UnsupportedError(entry.id + ": Sigma membership unknown and no potential density given");
}

BernsteinFunction conjugate_bernstein_of_h(double b, const PotentialDensity& h) {
  if (!(b >= 0.0)) throw DomainError("conjugate_bernstein_of_h requires b >= 0");
  if (h.h) {
    const auto head = quad::integrate(h.h, 0.0, 1.0, 1e-10);
    if (!std::isfinite(head.value) || head.error > 1e-6 * std::max(1.0, std::fabs(head.value))) {
      throw SingularInputError("int_0^1 h(x) dx diverges", head.value, head.error);
    }
  }
  // -int (1 - e^{-sx}) dh(x) = s int e^{-sx} h(x) dx after integrating by parts.
  auto phi = [b, h](double s) { return b * s + s * laplace_h(h, s); };
  auto phi_prime = [b, h](double s) {
    if (!h.h) return b;
    const double moment =
        quad::integrate_half_line([&](double x) { return x * std::exp(-s * x) * h.h(x); }, 1.0,
                                  1e-12)
            .value;
    return b + laplace_h(h, s) - s * moment;
  };
  return BernsteinFunction("conj(" + (h.name.empty() ? std::string("h") : h.name) + ")", phi,
                           phi_prime);
}

std::vector<SwapResidual> swap_check(const BernsteinFunction& f, std::span<const double> grid,
                                     const ProductOptions& opt) {
  if (f.is_in_sigma() != Flag::yes) {
    throw PreconditionError(f.name() + " is not flagged in Sigma; no I/R swap");
  }
  const BernsteinFunction fc = conjugate(f);
  std::vector<SwapResidual> out;
  for (double r : grid) {
    const double R_conj = R_product(fc, r, opt).value;
    const double I_conj = I_product(fc, r, opt).value;
    const double I_f = I_product(f, r, opt).value;
    const double R_f = R_product(f, r, opt).value;
    out.push_back({r, std::fabs(R_conj / I_f - 1.0), std::fabs(I_conj / R_f - 1.0)});
  }
  return out;
}

}  // namespace perpetua
