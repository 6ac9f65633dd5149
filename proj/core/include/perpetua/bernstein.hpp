#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perpetua/measures.hpp"

namespace perpetua {

/// Three-valued structural flag. Classification code never treats `unknown`
/// as either answer.
enum class Flag { no, yes, unknown };

std::string_view to_string(Flag f);

/// Levy data (a, lambda) of a subordinator: drift, absolutely continuous
/// Levy density and atoms.
class LevyTriple {
 public:
  using Density = std::function<double(double)>;

  /// Validates drift >= 0, atoms at x > 0 with positive mass, and that
  /// int (x ^ 1) lambda(dx) is finite. Throws ValidationError otherwise.
  LevyTriple(double drift, Density density = {}, std::vector<Atom> atoms = {});

  double drift() const noexcept { return drift_; }
  bool has_density() const noexcept { return static_cast<bool>(density_); }
  double density(double x) const { return density_ ? density_(x) : 0.0; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  /// x lambda(x), the density of the size-biased measure.
  double size_biased_density(double x) const { return x * density(x); }

  /// lambda((x, inf)).
  double tail(double x, double tol = 1e-12) const;

  /// int_0^eps y lambda(dy): mean rate of jumps below eps.
  double small_jump_mean(double eps, double tol = 1e-12) const;

  /// int (x ^ 1) lambda(dx).
  double integrability_mass(double tol = 1e-12) const;

 private:
  double drift_;
  Density density_;
  std::vector<Atom> atoms_;
};

/// Structural flags of a Bernstein function.
struct BernsteinTraits {
  Flag complete = Flag::unknown;  // complete Bernstein function
  Flag in_sigma = Flag::unknown;  // Phi* = s/Phi is Bernstein and null at 0
  double value_at_zero = 0.0;     // 0 for every genuine Bernstein function
  /// Phi'(0+), possibly +inf. Used to compute lim_{s->0} s/Phi(s).
  std::optional<double> derivative_at_zero;
};

/// Closed-form Bernstein function Phi with optional derivative, Levy data and
/// structural flags. Cheap to copy; immutable.
class BernsteinFunction {
 public:
  using Map = std::function<double(double)>;

  using Traits = BernsteinTraits;

  BernsteinFunction(std::string name, Map phi, Map phi_prime = {},
                    std::optional<LevyTriple> levy = std::nullopt, Traits traits = {});

  const std::string& name() const noexcept { return impl_->name; }

  /// Phi(s). Exactly value_at_zero() at s == 0; DomainError for s < 0.
  double operator()(double s) const;

  /// Phi'(s) for s > 0: closed form when supplied, otherwise a central
  /// difference with h = max(1e-6, 1e-6 s).
  double derivative(double s) const;

  bool has_closed_derivative() const noexcept { return static_cast<bool>(impl_->phi_prime); }
  const std::optional<LevyTriple>& levy() const noexcept { return impl_->levy; }
  const Traits& traits() const noexcept { return impl_->traits; }
  Flag is_complete_bernstein() const noexcept { return impl_->traits.complete; }
  Flag is_in_sigma() const noexcept { return impl_->traits.in_sigma; }
  double value_at_zero() const noexcept { return impl_->traits.value_at_zero; }

 private:
  struct Impl {
    std::string name;
    Map phi;
    Map phi_prime;
    std::optional<LevyTriple> levy;
    Traits traits;
  };
  std::shared_ptr<const Impl> impl_;
};

double eval_phi(const BernsteinFunction& f, double s);

/// a s + int (1 - e^{-sx}) lambda(dx) by quadrature. Throws QuadratureError
/// (carrying the partial value) if the absolute error estimate exceeds tol.
double eval_phi_from_levy(const LevyTriple& triple, double s, double tol = 1e-10);

/// s -> s / Phi(s), with the value at 0 taken as the limit 1/Phi'(0+).
/// The Sigma flag is inherited (Phi in Sigma implies Phi* in Sigma).
BernsteinFunction conjugate(const BernsteinFunction& f);

/// s -> Phi(s)^alpha for alpha in (0, 1].
BernsteinFunction power_subordinate(const BernsteinFunction& f, double alpha);

struct ShapeCheck {
  bool null_at_zero = false;
  bool nondecreasing = false;
  bool concave = false;
  bool ok() const { return null_at_zero && nondecreasing && concave; }
};

/// Necessary conditions for a Bernstein function on a sorted grid of s > 0:
/// Phi(0) = 0, nonnegative increments and nonincreasing chord slopes, each up
/// to `rel_tol` relative.
ShapeCheck check_shape(const BernsteinFunction& f, std::span<const double> grid,
                       double rel_tol = 1e-9);

/// Maximum relative gap between the closed-form Phi and the Levy-triple
/// quadrature on `grid`. Throws UnsupportedError when f has no triple.
double levy_consistency_gap(const BernsteinFunction& f, std::span<const double> grid,
                            double tol = 1e-11);

/// Geometric grid of `count` points on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int count);

}  // namespace perpetua
