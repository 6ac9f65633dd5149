#include "perpetua/special.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "perpetua/errors.hpp"

namespace perpetua {

namespace {
void require_positive(double r, const char* fn) {
  if (!(r > 0.0)) {
    throw DomainError(std::string(fn) + ": argument must be > 0, got " + std::to_string(r));
  }
}
}  // namespace

double gamma_fn(double r) {
  require_positive(r, "gamma_fn");
  return boost::math::tgamma(r);
}

double log_gamma(double r) {
  require_positive(r, "log_gamma");
  return boost::math::lgamma(r);
}

double digamma(double r) {
  require_positive(r, "digamma");
  return boost::math::digamma(r);
}

double gamma_p(double a, double x) {
  require_positive(a, "gamma_p");
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(a, x);
}

double gamma_q(double a, double x) {
  require_positive(a, "gamma_q");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(a, x);
}

double gamma_ratio(double x, double delta) {
  require_positive(x, "gamma_ratio");
  require_positive(x + delta, "gamma_ratio");
  if (delta == 0.0) return 1.0;
  return boost::math::tgamma_delta_ratio(x, delta);
}

double expint_e1(double x) {
  require_positive(x, "expint_e1");
  return boost::math::expint(1, x);
}

}  // namespace perpetua
