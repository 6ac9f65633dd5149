#include "perpetua/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "perpetua/errors.hpp"
#include "perpetua/quadrature.hpp"

namespace perpetua {

std::string_view to_string(Flag f) {
  switch (f) {
    case Flag::no: return "no";
    case Flag::yes: return "yes";
    case Flag::unknown: return "unknown";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// LevyTriple

LevyTriple::LevyTriple(double drift, Density density, std::vector<Atom> atoms)
    : drift_(drift), density_(std::move(density)), atoms_(std::move(atoms)) {
  if (!(drift_ >= 0.0) || !std::isfinite(drift_)) {
    throw ValidationError("Levy triple: drift must be finite and >= 0");
  }
  for (const Atom& a : atoms_) {
    if (!(a.location > 0.0) || !std::isfinite(a.location)) {
      throw ValidationError("Levy triple: atom locations must be > 0");
    }
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
      throw ValidationError("Levy triple: atom masses must be > 0");
    }
  }
  double mass = 0.0;
  try {
    mass = integrability_mass(1e-8);
  } catch (const QuadratureError&) {
    throw ValidationError("Levy triple: int (x ^ 1) lambda(dx) could not be evaluated");
  }
  if (!std::isfinite(mass)) {
    throw ValidationError("Levy triple: int (x ^ 1) lambda(dx) diverges");
  }
}

double LevyTriple::tail(double x, double tol) const {
  double out = 0.0;
  for (const Atom& a : atoms_) {
    if (a.location > x) out += a.mass;
  }
  if (density_) {
    const auto r = quad::integrate_to_infinity(density_, x);
    quad::require(r, std::max(tol, tol * std::fabs(r.value)), "Levy tail");
    out += r.value;
  }
  return out;
}

double LevyTriple::small_jump_mean(double eps, double tol) const {
  double out = 0.0;
  for (const Atom& a : atoms_) {
    if (a.location <= eps) out += a.location * a.mass;
  }
  if (density_) {
    const auto r = quad::integrate([this](double x) { return x * density_(x); }, 0.0, eps);
    quad::require(r, std::max(tol, tol * std::fabs(r.value)), "small-jump mean");
    out += r.value;
  }
  return out;
}

double LevyTriple::integrability_mass(double tol) const {
  double out = 0.0;
  for (const Atom& a : atoms_) out += std::min(a.location, 1.0) * a.mass;
  if (density_) {
    const auto head = quad::integrate([this](double x) { return x * density_(x); }, 0.0, 1.0);
    const auto tail = quad::integrate_to_infinity(density_, 1.0);
    const quad::QuadResult sum{head.value + tail.value, head.error + tail.error,
                               head.l1 + tail.l1};
    quad::require(sum, std::max(tol, tol * std::fabs(sum.value)), "Levy integrability");
    out += sum.value;
  }
  return out;
}

// ---------------------------------------------------------------------------
// BernsteinFunction

BernsteinFunction::BernsteinFunction(std::string name, Map phi, Map phi_prime,
                                     std::optional<LevyTriple> levy, Traits traits)
    : impl_(std::make_shared<const Impl>(
          Impl{std::move(name), std::move(phi), std::move(phi_prime), std::move(levy),
               std::move(traits)})) {
  if (!impl_->phi) throw PreconditionError("Bernstein function needs an evaluator");
}

double BernsteinFunction::operator()(double s) const {
  if (!(s >= 0.0)) throw DomainError("Phi(s) requires s >= 0");
  if (s == 0.0) return impl_->traits.value_at_zero;
  return impl_->phi(s);
}

double BernsteinFunction::derivative(double s) const {
  if (!(s >= 0.0)) throw DomainError("Phi'(s) requires s >= 0");
  if (s == 0.0 && impl_->traits.derivative_at_zero) return *impl_->traits.derivative_at_zero;
  if (impl_->phi_prime && s > 0.0) return impl_->phi_prime(s);
  const double h = std::max(1e-6, 1e-6 * s);
  if (s > h) return ((*this)(s + h) - (*this)(s - h)) / (2.0 * h);
  return ((*this)(s + h) - (*this)(s)) / h;
}

double eval_phi(const BernsteinFunction& f, double s) { return f(s); }

double eval_phi_from_levy(const LevyTriple& triple, double s, double tol) {
  if (!(s >= 0.0)) throw DomainError("Phi(s) requires s >= 0");
  if (s == 0.0) return 0.0;
  double out = triple.drift() * s;
  for (const Atom& a : triple.atoms()) out += -std::expm1(-s * a.location) * a.mass;
  if (triple.has_density()) {
    const auto r = quad::integrate_half_line(
        [&](double x) { return -std::expm1(-s * x) * triple.density(x); }, 1.0);
    out += r.value;
    if (!std::isfinite(r.value) || r.error > tol) {
      throw QuadratureError("Phi from Levy triple: error estimate " + std::to_string(r.error) +
                                " exceeds tolerance",
                            out, r.error);
    }
  }
  return out;
}

BernsteinFunction conjugate(const BernsteinFunction& f) {
  BernsteinFunction::Traits t;
  t.in_sigma = f.is_in_sigma();
  t.complete = f.is_complete_bernstein() == Flag::yes ? Flag::yes : Flag::unknown;

  // s / Phi(s) -> 1 / Phi'(0+) as s -> 0.
  const auto& d0 = f.traits().derivative_at_zero;
  if (d0) {
    t.value_at_zero = std::isinf(*d0) ? 0.0 : 1.0 / *d0;
  } else {
    const double s = 1e-9;
    t.value_at_zero = s / f(s);
  }
  // Phi*(s)/s = 1/Phi(s) blows up at 0, so a conjugate null at 0 has infinite
  // slope there.
  if (t.value_at_zero == 0.0) t.derivative_at_zero = std::numeric_limits<double>::infinity();

  auto phi = [f](double s) { return s / f(s); };
  auto phi_prime = [f](double s) {
    const double p = f(s);
    return (p - s * f.derivative(s)) / (p * p);
  };
  return BernsteinFunction(f.name() + "*", phi, phi_prime, std::nullopt, t);
}

BernsteinFunction power_subordinate(const BernsteinFunction& f, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("power_subordinate: alpha not in (0, 1]");
  if (alpha == 1.0) return f;

  BernsteinFunction::Traits t;
  t.complete = f.is_complete_bernstein() == Flag::yes ? Flag::yes : Flag::unknown;
  const auto& d0 = f.traits().derivative_at_zero;
  if (d0 && *d0 > 0.0) t.derivative_at_zero = std::numeric_limits<double>::infinity();

  auto phi = [f, alpha](double s) { return std::pow(f(s), alpha); };
  auto phi_prime = [f, alpha](double s) {
    return alpha * std::pow(f(s), alpha - 1.0) * f.derivative(s);
  };
  std::string name = f.name() + "^" + std::to_string(alpha);
  return BernsteinFunction(std::move(name), phi, phi_prime, std::nullopt, t);
}

ShapeCheck check_shape(const BernsteinFunction& f, std::span<const double> grid, double rel_tol) {
  ShapeCheck out;
  out.null_at_zero = f(0.0) == 0.0;
  out.nondecreasing = true;
  out.concave = true;
  double prev_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double s0 = grid[i], s1 = grid[i + 1];
    const double v0 = f(s0), v1 = f(s1);
    const double dv = v1 - v0;
    if (dv < -rel_tol * std::max(std::fabs(v0), std::fabs(v1))) out.nondecreasing = false;
    const double slope = dv / (s1 - s0);
    if (std::isfinite(prev_slope) && slope > prev_slope + rel_tol * std::fabs(prev_slope)) {
      out.concave = false;
    }
    prev_slope = slope;
  }
  return out;
}

double levy_consistency_gap(const BernsteinFunction& f, std::span<const double> grid,
                            double tol) {
  if (!f.levy()) throw UnsupportedError(f.name() + " carries no Levy triple");
  double gap = 0.0;
  for (double s : grid) {
    const double closed = f(s);
    const double numeric = eval_phi_from_levy(*f.levy(), s, tol);
    gap = std::max(gap, std::fabs(numeric / closed - 1.0));
  }
  return gap;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi >= lo) || count < 1) throw DomainError("log_grid: need 0 < lo <= hi");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

}  // namespace perpetua
