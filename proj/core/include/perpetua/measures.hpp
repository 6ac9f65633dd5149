#pragma once

#include <functional>
#include <string>
#include <vector>

namespace perpetua {

/// Point mass `mass` at `location`.
struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// The measure kappa on (0, inf) whose Laplace transform is Phi'/Phi, stored
/// as an absolutely continuous part with density k plus atoms.
///
/// `complement`, when set, evaluates 1 - k(x) without cancellation; it is used
/// wherever the signed measure dx - kappa(dx) appears.
struct KappaMeasure {
  std::string name;
  std::function<double(double)> density;
  std::function<double(double)> complement;
  std::vector<Atom> atoms;

  bool has_density() const { return static_cast<bool>(density); }
  bool has_atoms() const { return !atoms.empty(); }
  double k(double x) const { return density ? density(x) : 0.0; }
  double one_minus_k(double x) const {
    if (complement) return complement(x);
    return 1.0 - k(x);
  }
};

/// Closed-form density or survival function of I or R, used by the
/// convolution-equation residuals.
struct DensityFunction {
  enum class Kind { density_I, density_R, survival_R };

  Kind kind = Kind::density_I;
  double lo = 0.0;  // support (lo, hi)
  double hi = 0.0;
  std::function<double(double)> eval;

  double operator()(double v) const {
    if (v <= lo) return kind == Kind::survival_R ? 1.0 : 0.0;
    if (v >= hi) return 0.0;
    return eval(v);
  }
};

/// Potential measure rho(dx) = b delta_0(dx) + h(x) dx.
struct PotentialDensity {
  double point_mass_b = 0.0;
  std::function<double(double)> h;  // empty means h == 0
  std::string name;

  double eval_h(double x) const { return h ? h(x) : 0.0; }
};

/// Measure carried by a half line, reported in its own coordinate: for
/// `negative_axis` the density is evaluated at y < 0 and atom locations are
/// negative.
struct HalfLineMeasure {
  bool negative_axis = false;
  std::function<double(double)> density;  // empty means no density part
  std::vector<Atom> atoms;

  double eval_density(double y) const { return density ? density(y) : 0.0; }
};

}  // namespace perpetua
