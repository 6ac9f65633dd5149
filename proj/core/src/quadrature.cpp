#include "perpetua/quadrature.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "perpetua/errors.hpp"

namespace perpetua::quad {

namespace {

// Each thread owns its integrators; the abscissa tables are its scratch space.
boost::math::quadrature::tanh_sinh<double>& tanh_sinh_engine() {
  thread_local boost::math::quadrature::tanh_sinh<double> engine(15);
  return engine;
}

boost::math::quadrature::exp_sinh<double>& exp_sinh_engine() {
  thread_local boost::math::quadrature::exp_sinh<double> engine(9);
  return engine;
}

// Nodes of double-exponential rules come within a few ulps of the endpoints,
// where intermediate products may overflow although the integrand itself is
// integrable. Such values carry weights far below double resolution.
auto finite_only(const Integrand& f) {
  return [&f](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : 0.0;
  };
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, double rel_tol) {
  QuadResult out;
  if (a == b) return out;
  if (!(a < b)) {
    QuadResult r = integrate(f, b, a, rel_tol);
    r.value = -r.value;
    return r;
  }
  std::size_t levels = 0;
  if (std::fabs(a) >= 0.5) {
    // Boost 1.74 places left-end nodes at avg + diff*z, which rounds onto a
    // when |a| is not small; shifting to (0, b - a) keeps its exact branch.
    const auto g = finite_only(f);
    out.value = tanh_sinh_engine().integrate([&g, a](double t) { return g(a + t); }, 0.0, b - a,
                                             rel_tol, &out.error, &out.l1, &levels);
  } else {
    out.value = tanh_sinh_engine().integrate(finite_only(f), a, b, rel_tol, &out.error, &out.l1,
                                             &levels);
  }
  // Boost reports error and L1 of the integral mapped onto (-1, 1).
  const double half_width = 0.5 * (b - a);
  out.error *= half_width;
  out.l1 *= half_width;
  return out;
}

QuadResult integrate_to_infinity(const Integrand& f, double a, double rel_tol) {
  QuadResult out;
  std::size_t levels = 0;
  out.value = exp_sinh_engine().integrate(finite_only(f), a,
                                          std::numeric_limits<double>::infinity(), rel_tol,
                                          &out.error, &out.l1, &levels);
  return out;
}

QuadResult integrate_half_line(const Integrand& f, double split, double rel_tol) {
  const QuadResult head = integrate(f, 0.0, split, rel_tol);
  const QuadResult tail = integrate_to_infinity(f, split, rel_tol);
  return {head.value + tail.value, head.error + tail.error, head.l1 + tail.l1};
}

void require(const QuadResult& r, double abs_tol, const char* what) {
  if (!std::isfinite(r.value)) {
    throw SingularInputError(std::string(what) + ": integral is not finite", r.value, r.error);
  }
  if (r.error > abs_tol) {
    throw QuadratureError(std::string(what) + ": quadrature error estimate " +
                              std::to_string(r.error) + " exceeds " + std::to_string(abs_tol),
                          r.value, r.error);
  }
}

}  // namespace perpetua::quad
