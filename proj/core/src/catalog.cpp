#include "perpetua/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "perpetua/errors.hpp"
#include "perpetua/quadrature.hpp"
#include "perpetua/special.hpp"

namespace perpetua {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exponent above which e^{-x} underflows; atom lists stop there.
constexpr double kUnderflowX = 745.0;

bool near(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

double beta_fn(double a, double b) {
  return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

// E[X^t] for the elementary factors; DomainError when the moment is infinite.
double factor_moment(const ProductLaw::Factor& f, double t) {
  switch (f.kind) {
    case ProductLaw::Kind::exponential:
      if (!(t > -1.0)) throw DomainError("Exp(1) moment of order <= -1 is infinite");
      return gamma_fn(1.0 + t);
    case ProductLaw::Kind::gamma:
      if (!(t > -f.a)) throw DomainError("gamma moment of order <= -shape is infinite");
      return std::exp(log_gamma(f.a + t) - log_gamma(f.a));
    case ProductLaw::Kind::beta:
      if (!(t > -f.a)) throw DomainError("beta moment of order <= -a is infinite");
      return std::exp(log_gamma(f.a + t) + log_gamma(f.a + f.b) - log_gamma(f.a) -
                      log_gamma(f.a + f.b + t));
    case ProductLaw::Kind::positive_stable:
      if (!(t < f.a)) throw DomainError("positive stable moment of order >= alpha is infinite");
      return std::exp(log_gamma(1.0 - t / f.a) - log_gamma(1.0 - t));
  }
  return 1.0;
}

std::string factor_id(const ProductLaw::Factor& f) {
  std::string out;
  switch (f.kind) {
    case ProductLaw::Kind::exponential: out = "exp"; break;
    case ProductLaw::Kind::gamma: out = "gamma(" + format_number(f.a) + ")"; break;
    case ProductLaw::Kind::beta:
      out = "beta(" + format_number(f.a) + "," + format_number(f.b) + ")";
      break;
    case ProductLaw::Kind::positive_stable: out = "stable(" + format_number(f.a) + ")"; break;
  }
  if (f.power != 1.0) out += "^" + format_number(f.power);
  return out;
}

std::string canonical_id(const std::string& family,
                         const std::vector<std::pair<std::string, double>>& params) {
  std::string id = family;
  for (std::size_t i = 0; i < params.size(); ++i) {
    id += (i == 0 ? ":" : ",");
    id += params[i].first + "=" + format_number(params[i].second);
  }
  return id;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

KappaMeasure density_kappa(std::string name, std::function<double(double)> k,
                           std::function<double(double)> one_minus_k) {
  KappaMeasure out;
  out.name = std::move(name);
  out.density = std::move(k);
  out.complement = std::move(one_minus_k);
  return out;
}

// Gamma process: k(x) = e^{-x} int_0^inf x^l / Gamma(l+1) dl. The integrand
// peaks near l = x; the range is split around the peak and cut at
// max(50, 10x), beyond which it is below 1e-18 of the peak.
double gamma_process_k(double x) {
  if (!(x > 0.0)) return 0.0;
  const double lx = std::log(x);
  auto f = [x, lx](double l) { return std::exp(l * lx - log_gamma(l + 1.0) - x); };
  const double upper = std::max(50.0, 10.0 * x);
  const double w = 12.0 * std::sqrt(x + 1.0);
  const double a = std::max(0.0, x - w);
  const double b = std::min(upper, x + w);
  double sum = quad::integrate(f, a, b, 1e-13).value;
  if (a > 0.0) sum += quad::integrate(f, 0.0, a, 1e-13).value;
  if (b < upper) sum += quad::integrate(f, b, upper, 1e-13).value;
  return sum;
}

// 1 - k(x) = int_0^1 Q(l, x) dl, since k(x) = P(gamma_U <= x) with U uniform.
double gamma_process_one_minus_k(double x) {
  if (!(x > 0.0)) return 1.0;
  return quad::integrate([x](double l) { return l > 0.0 ? gamma_q(l, x) : 0.0; }, 0.0, 1.0,
                         1e-13)
      .value;
}

std::vector<Atom> geomcp_levy_atoms(double c, double q) {
  std::vector<Atom> atoms;
  const double step = -std::log(q);
  const double ratio = c / q;
  double weight = 1.0 - ratio;
  for (int n = 1; n * step <= kUnderflowX && weight > 1e-300; ++n) {
    atoms.push_back({n * step, weight});
    weight *= ratio;
  }
  return atoms;
}

std::vector<Atom> geomcp_kappa_atoms(double c, double q) {
  std::vector<Atom> atoms;
  const double step = -std::log(q);
  const double ratio = c / q;
  double power = ratio;
  for (int n = 1; n * step <= kUnderflowX; ++n) {
    atoms.push_back({n * step, step * (1.0 - power)});
    power *= ratio;
  }
  return atoms;
}

ProductLaw::Factor exp_factor(double power = 1.0) {
  return {ProductLaw::Kind::exponential, 1.0, 0.0, power};
}
ProductLaw::Factor gamma_factor(double a, double power = 1.0) {
  return {ProductLaw::Kind::gamma, a, 0.0, power};
}
ProductLaw::Factor beta_factor(double a, double b, double power = 1.0) {
  return {ProductLaw::Kind::beta, a, b, power};
}
ProductLaw::Factor stable_factor(double a, double power = 1.0) {
  return {ProductLaw::Kind::positive_stable, a, 0.0, power};
}

BernsteinFunction::Traits traits(Flag complete, Flag in_sigma, double d0) {
  BernsteinFunction::Traits t;
  t.complete = complete;
  t.in_sigma = in_sigma;
  t.derivative_at_zero = d0;
  return t;
}

CatalogEntry blank_entry(std::string family, std::vector<std::pair<std::string, double>> params,
                         BernsteinFunction f) {
  CatalogEntry e{canonical_id(family, params), std::move(family), std::move(params),
                 std::move(f), {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
  return e;
}

}  // namespace

// ---------------------------------------------------------------------------
// ProductLaw

ProductLaw::ProductLaw(double scale, std::vector<Factor> factors)
    : scale_(scale), factors_(std::move(factors)) {
  if (!(scale_ > 0.0)) throw DomainError("product law scale must be > 0");
  for (const Factor& f : factors_) {
    if (f.kind != Kind::exponential && !(f.a > 0.0)) {
      throw DomainError("product law factor parameter must be > 0");
    }
    if (f.kind == Kind::beta && !(f.b > 0.0)) throw DomainError("beta parameter b must be > 0");
    if (f.kind == Kind::positive_stable && !(f.a < 1.0)) {
      throw DomainError("positive stable index must lie in (0, 1)");
    }
  }
}

std::string ProductLaw::id() const {
  std::string out;
  if (scale_ != 1.0 || factors_.empty()) out = format_number(scale_);
  for (const Factor& f : factors_) {
    if (!out.empty()) out += "*";
    out += factor_id(f);
  }
  return out;
}

double ProductLaw::mellin(double r) const {
  const double t = r - 1.0;
  double out = std::pow(scale_, t);
  for (const Factor& f : factors_) out *= factor_moment(f, f.power * t);
  return out;
}

// ---------------------------------------------------------------------------
// Entries

std::string CatalogEntry::describe() const {
  std::ostringstream os;
  os << id << "  Phi=" << function.name();
  std::vector<std::string> closed;
  if (closed_R) closed.emplace_back("R");
  if (closed_I) closed.emplace_back("I");
  if (closed_kappa) closed.emplace_back("kappa");
  if (potential) closed.emplace_back("rho");
  if (function.levy()) closed.emplace_back("levy");
  os << "  closed=";
  for (std::size_t i = 0; i < closed.size(); ++i) os << (i ? "," : "") << closed[i];
  if (closed.empty()) os << "-";
  if (known_law_I) os << "  I~" << known_law_I->id();
  if (known_law_R) os << "  R~" << known_law_R->id();
  os << "  complete=" << to_string(function.is_complete_bernstein())
     << "  sigma=" << to_string(function.is_in_sigma());
  auto flag = [&os](const char* name, const std::optional<bool>& v) {
    if (v) os << "  " << name << "=" << (*v ? "true" : "false");
  };
  flag("r_mid", expected.r_mid);
  flag("i_mid", expected.i_mid);
  flag("logR_sd", expected.logR_sd);
  flag("logI_sd", expected.logI_sd);
  return os.str();
}

CatalogEntry trivial_entry() {
  BernsteinFunction f(
      "s", [](double s) { return s; }, [](double) { return 1.0; }, LevyTriple(1.0),
      traits(Flag::yes, Flag::no, 1.0));
  CatalogEntry e = blank_entry("trivial", {}, f);
  e.closed_R = [](double r) { return gamma_fn(r); };
  e.closed_I = [](double) { return 1.0; };
  e.closed_kappa = density_kappa("lebesgue", [](double) { return 1.0; },
                                 [](double) { return 0.0; });
  e.known_law_I = ProductLaw::point(1.0);
  e.known_law_R = ProductLaw(1.0, {exp_factor()});
  e.potential = PotentialDensity{0.0, [](double) { return 1.0; }, "lebesgue"};
  return e;
}

CatalogEntry stable_entry(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("stable: alpha must lie in (0, 1)");
  const double levy_c = alpha / gamma_fn(1.0 - alpha);
  LevyTriple triple(0.0, [alpha, levy_c](double x) { return levy_c * std::pow(x, -1.0 - alpha); });
  BernsteinFunction f(
      "s^" + format_number(alpha), [alpha](double s) { return std::pow(s, alpha); },
      [alpha](double s) { return alpha * std::pow(s, alpha - 1.0); }, triple,
      traits(Flag::yes, Flag::yes, kInf));
  CatalogEntry e = blank_entry("stable", {{"alpha", alpha}}, f);
  e.closed_R = [alpha](double r) { return std::exp(alpha * log_gamma(r)); };
  e.closed_I = [alpha](double r) { return std::exp((1.0 - alpha) * log_gamma(r)); };
  e.closed_kappa = density_kappa("constant", [alpha](double) { return alpha; },
                                 [alpha](double) { return 1.0 - alpha; });
  e.expected = {true, true, true, true};
  const double tail_c = 1.0 / gamma_fn(1.0 - alpha);
  e.levy_tail = [alpha, tail_c](double x) { return tail_c * std::pow(x, -alpha); };
  const double pot_c = 1.0 / gamma_fn(alpha);
  e.potential =
      PotentialDensity{0.0, [alpha, pot_c](double x) { return pot_c * std::pow(x, alpha - 1.0); },
                       "power"};
  return e;
}

CatalogEntry expcp_entry(double c) {
  if (!(c > 0.0)) throw DomainError("expcp: c must be > 0");
  LevyTriple triple(0.0, [c](double x) { return c * std::exp(-c * x); });
  BernsteinFunction f(
      "s/(s+" + format_number(c) + ")", [c](double s) { return s / (s + c); },
      [c](double s) { return c / ((s + c) * (s + c)); }, triple,
      traits(Flag::yes, Flag::no, 1.0 / c));
  CatalogEntry e = blank_entry("expcp", {{"c", c}}, f);
  const double lg_c1 = log_gamma(c + 1.0);
  e.closed_R = [c, lg_c1](double r) {
    return std::exp(lg_c1 + log_gamma(r) - log_gamma(c + r));
  };
  e.closed_I = [c, lg_c1](double r) { return std::exp(log_gamma(c + r) - lg_c1); };
  e.closed_kappa = density_kappa("1-exp(-cx)", [c](double x) { return -std::expm1(-c * x); },
                                 [c](double x) { return std::exp(-c * x); });
  e.known_law_I = ProductLaw(1.0, {gamma_factor(c + 1.0)});
  e.known_law_R = ProductLaw(1.0, {beta_factor(1.0, c)});
  e.expected = {true, true, true, true};
  e.density_I = DensityFunction{DensityFunction::Kind::density_I, 0.0, kInf, [c, lg_c1](double v) {
                                  return std::exp(c * std::log(v) - v - lg_c1);
                                }};
  e.survival_R = DensityFunction{DensityFunction::Kind::survival_R, 0.0, 1.0,
                                 [c](double v) { return std::pow(1.0 - v, c); }};
  e.density_R = DensityFunction{DensityFunction::Kind::density_R, 0.0, 1.0,
                                [c](double v) { return c * std::pow(1.0 - v, c - 1.0); }};
  e.levy_tail = [c](double x) { return std::exp(-c * x); };
  e.potential = PotentialDensity{1.0, [c](double) { return c; }, "constant"};
  return e;
}

CatalogEntry geomcp_entry(double c, double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("geomcp: q must lie in (0, 1)");
  if (!(c >= 0.0 && c < q)) throw DomainError("geomcp: c must satisfy 0 <= c < q");
  const double lq = std::log(q);
  const double ratio = c / q;
  LevyTriple triple(0.0, {}, geomcp_levy_atoms(c, q));
  BernsteinFunction f(
      "(1-q^s)/(1-cq^(s-1))",
      [q, ratio](double s) {
        const double u = std::pow(q, s);
        return -std::expm1(s * std::log(q)) / (1.0 - ratio * u);
      },
      [q, lq, ratio](double s) {
        const double u = std::pow(q, s);
        const double d = 1.0 - ratio * u;
        return -lq * u * (1.0 - ratio) / (d * d);
      },
      triple, traits(Flag::no, Flag::no, -lq / (1.0 - ratio)));
  CatalogEntry e = blank_entry("geomcp", {{"c", c}, {"q", q}}, f);
  e.closed_R = [c, q](double r) { return geomcp_R_qproduct(c, q, r); };
  e.closed_I = [c, q](double r) { return geomcp_I_qproduct(c, q, r); };
  KappaMeasure kappa;
  kappa.name = "lattice";
  kappa.atoms = geomcp_kappa_atoms(c, q);
  e.closed_kappa = std::move(kappa);
  e.expected.r_mid = true;
  e.expected.i_mid = false;
  e.expected.logI_sd = false;
  return e;
}

CatalogEntry gamma_entry() {
  LevyTriple triple(0.0, [](double x) { return std::exp(-x) / x; });
  BernsteinFunction f(
      "log(1+s)", [](double s) { return std::log1p(s); }, [](double s) { return 1.0 / (1.0 + s); },
      triple, traits(Flag::yes, Flag::no, 1.0));
  CatalogEntry e = blank_entry("gamma", {}, f);
  e.closed_kappa = density_kappa("gamma-process", gamma_process_k, gamma_process_one_minus_k);
  e.expected = {true, true, true, true};
  e.levy_tail = [](double x) { return expint_e1(x); };
  return e;
}

CatalogEntry by451_entry(double alpha, double c) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("by451: alpha must lie in (0, 1)");
  if (!(c > 1.0)) throw DomainError("by451: c must be > 1");
  const double inv_ga = 1.0 / gamma_fn(alpha);
  auto h = [alpha, c, inv_ga](double x) {
    return inv_ga * std::exp(-(c - 1.0) * x) * std::pow(-std::expm1(-x / alpha), alpha - 1.0);
  };
  // m = -h'
  auto m = [alpha, c, h](double x) {
    const double e = std::exp(-x / alpha);
    return h(x) * ((c - 1.0) + (1.0 - alpha) / alpha * e / (-std::expm1(-x / alpha)));
  };
  LevyTriple triple(0.0, m);
  auto phi = [alpha, c](double s) {
    return alpha * s * gamma_ratio(alpha * (s - 1.0 + c), alpha);
  };
  auto phi_prime = [alpha, c, phi](double s) {
    const double logd = 1.0 / s + alpha * (digamma(alpha * (s - 1.0 + c)) -
                                           digamma(alpha * (s + c)));
    return phi(s) * logd;
  };
  const double d0 = alpha * gamma_ratio(alpha * (c - 1.0), alpha);
  BernsteinFunction f("as*G(a(s-1+c))/G(a(s+c))", phi, phi_prime, triple,
                      traits(Flag::yes, Flag::no, d0));
  CatalogEntry e = blank_entry("by451", {{"alpha", alpha}, {"c", c}}, f);
  const double lg_ac = log_gamma(alpha * c);
  const double log_a = std::log(alpha);
  e.closed_I = [alpha, c, lg_ac, log_a](double r) {
    return std::exp((1.0 - r) * log_a + log_gamma(alpha * (r - 1.0 + c)) - lg_ac);
  };
  e.closed_R = [alpha, c, lg_ac, log_a](double r) {
    return std::exp((r - 1.0) * log_a + log_gamma(r) + lg_ac - log_gamma(alpha * (r - 1.0 + c)));
  };
  auto one_minus_k = [alpha, c](double x) {
    return std::exp(-(c - 1.0) * x) * std::expm1(-x) / std::expm1(-x / alpha);
  };
  e.closed_kappa = density_kappa(
      "by451", [one_minus_k](double x) { return 1.0 - one_minus_k(x); }, one_minus_k);
  e.known_law_I = ProductLaw(1.0 / alpha, {gamma_factor(alpha * c, alpha)});
  e.expected.r_mid = true;
  e.expected.i_mid = true;
  e.expected.logI_sd = true;
  // theta for I = G^alpha / alpha, G ~ gamma(alpha c).
  e.density_I = DensityFunction{DensityFunction::Kind::density_I, 0.0, kInf,
                                [alpha, c, lg_ac](double y) {
                                  const double ay = alpha * y;
                                  return std::exp((c - 1.0) * std::log(ay) -
                                                  std::pow(ay, 1.0 / alpha) - lg_ac);
                                }};
  e.levy_tail = h;
  return e;
}

CatalogEntry by452_entry(double alpha, double b, double c) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("by452: alpha must lie in (0, 1)");
  if (!(b > 1.0 && b <= c)) throw DomainError("by452: need 1 < b <= c");
  auto phi = [alpha, b, c](double s) {
    return s / ((b + s - 1.0) * gamma_ratio(alpha * (s - 1.0 + c), alpha));
  };
  auto phi_prime = [alpha, b, c, phi](double s) {
    const double logd = 1.0 / s - 1.0 / (b + s - 1.0) +
                        alpha * (digamma(alpha * (s + c)) - digamma(alpha * (s - 1.0 + c)));
    return phi(s) * logd;
  };
  const double d0 = 1.0 / ((b - 1.0) * gamma_ratio(alpha * (c - 1.0), alpha));
  BernsteinFunction f("sG(a(s+c))/((b+s-1)G(a(s-1+c)))", phi, phi_prime, std::nullopt,
                      traits(Flag::yes, Flag::no, d0));
  CatalogEntry e = blank_entry("by452", {{"alpha", alpha}, {"b", b}, {"c", c}}, f);
  const double lg_ac = log_gamma(alpha * c);
  const double lg_b = log_gamma(b);
  e.closed_R = [alpha, b, c, lg_ac](double r) {
    return (b - 1.0) * beta_fn(r, b - 1.0) *
           std::exp(log_gamma(alpha * (r - 1.0 + c)) - lg_ac);
  };
  e.closed_I = [alpha, b, c, lg_ac, lg_b](double r) {
    return std::exp(lg_ac + log_gamma(r - 1.0 + b) - lg_b - log_gamma(alpha * (r - 1.0 + c)));
  };
  auto one_minus_k = [alpha, b, c](double x) {
    return std::exp(-(b - 1.0) * x) -
           std::exp(-(c - 1.0) * x) * std::expm1(-x) / std::expm1(-x / alpha);
  };
  e.closed_kappa = density_kappa(
      "by452", [one_minus_k](double x) { return 1.0 - one_minus_k(x); }, one_minus_k);
  e.known_law_R = ProductLaw(1.0, {beta_factor(1.0, b - 1.0), gamma_factor(alpha * c, alpha)});
  e.expected.r_mid = true;
  e.expected.i_mid = true;
  return e;
}

CatalogEntry rou_entry(double alpha, double mu) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("rou: alpha must lie in (0, 1)");
  if (!(mu > 0.0)) throw DomainError("rou: mu must be > 0");
  const double two_mu = 2.0 * mu;
  const double levy_c = two_mu * alpha / gamma_fn(1.0 - alpha);
  LevyTriple triple(0.0, [alpha, two_mu, levy_c](double x) {
    return levy_c * std::exp(-two_mu * alpha * x) *
           std::pow(-std::expm1(-two_mu * x), -1.0 - alpha);
  });
  // Gamma(sigma + alpha) / Gamma(sigma) = sigma Gamma(sigma + alpha) / Gamma(sigma + 1).
  auto phi = [alpha, two_mu](double s) {
    const double sigma = s / two_mu;
    return sigma * gamma_ratio(sigma + alpha, 1.0 - alpha);
  };
  auto phi_prime = [alpha, two_mu, phi](double s) {
    const double sigma = s / two_mu;
    // psi(sigma + alpha) - psi(sigma), with psi(sigma) = psi(sigma + 1) - 1/sigma.
    const double dpsi = digamma(sigma + alpha) - digamma(sigma + 1.0) + 1.0 / sigma;
    return phi(s) * dpsi / two_mu;
  };
  BernsteinFunction f("G(s/2mu+a)/G(s/2mu)", phi, phi_prime, triple,
                      traits(Flag::yes, Flag::no, gamma_fn(alpha) / two_mu));
  CatalogEntry e = blank_entry("rou", {{"alpha", alpha}, {"mu", mu}}, f);
  e.closed_kappa = density_kappa(
      "rou",
      [alpha, two_mu](double x) {
        return std::expm1(-two_mu * alpha * x) / std::expm1(-two_mu * x);
      },
      [alpha, two_mu](double x) {
        return std::exp(-two_mu * alpha * x) * std::expm1(-two_mu * (1.0 - alpha) * x) /
               std::expm1(-two_mu * x);
      });
  e.expected.r_mid = true;
  e.expected.i_mid = true;
  e.expected.logI_sd = true;
  const double pot_c = two_mu / gamma_fn(alpha);
  e.potential = PotentialDensity{0.0,
                                 [alpha, two_mu, pot_c](double x) {
                                   return pot_c * std::pow(-std::expm1(-two_mu * x), alpha - 1.0);
                                 },
                                 "rou"};

  const bool case_alpha = near(two_mu * alpha, 1.0);
  const bool case_beta = near(two_mu * (1.0 - alpha), 1.0);
  if (case_beta) {
    const double beta = 1.0 - alpha;
    const double log_b = std::log(beta);
    e.closed_I = [beta, log_b](double r) {
      return std::exp((1.0 - r) * log_b + log_gamma(beta * (r - 1.0) + 1.0));
    };
    e.closed_R = [beta, log_b](double r) {
      return std::exp((r - 1.0) * log_b + log_gamma(r) - log_gamma(beta * (r - 1.0) + 1.0));
    };
    e.known_law_I = ProductLaw(1.0 / beta, {exp_factor(beta)});
    e.known_law_R = ProductLaw(beta, {stable_factor(beta, alpha - 1.0)});
    e.expected.logR_sd = true;
  }
  if (case_alpha) {
    const double lg_a = log_gamma(alpha);
    e.closed_R = [alpha, lg_a](double r) { return std::exp(log_gamma(alpha * r) - lg_a); };
    e.closed_I = [alpha, lg_a](double r) {
      return std::exp(lg_a + log_gamma(r) - log_gamma(alpha * r));
    };
    e.known_law_R = ProductLaw(1.0, {gamma_factor(alpha, alpha)});
    e.expected.logR_sd = true;
    const double inv = 1.0 / gamma_fn(alpha + 1.0);
    e.density_R = DensityFunction{DensityFunction::Kind::density_R, 0.0, kInf,
                                  [alpha, inv](double y) {
                                    return inv * std::exp(-std::pow(y, 1.0 / alpha));
                                  }};
  }
  return e;
}

// ---------------------------------------------------------------------------
// q-products

double geomcp_R_qproduct(double c, double q, double r) {
  if (!(r > 0.0)) throw DomainError("q-product requires r > 0");
  double log_sum = 0.0;
  for (int j = 0;; ++j) {
    const double num = -std::expm1((j + 1.0) * std::log(q)) * (1.0 - c * std::pow(q, j + r - 1.0));
    const double den = -std::expm1((j + r) * std::log(q)) * (1.0 - c * std::pow(q, j));
    const double factor = num / den;
    log_sum += std::log(factor);
    if (std::fabs(factor - 1.0) < 1e-16 || j > 100000) break;
  }
  return std::exp(log_sum);
}

double geomcp_I_qproduct(double c, double q, double r) {
  if (!(r > 0.0)) throw DomainError("q-product requires r > 0");
  double log_sum = log_gamma(r);
  for (int j = 0;; ++j) {
    const double num = -std::expm1((j + r) * std::log(q)) * (1.0 - c * std::pow(q, j));
    const double den = -std::expm1((j + 1.0) * std::log(q)) * (1.0 - c * std::pow(q, j + r - 1.0));
    const double factor = num / den;
    log_sum += std::log(factor);
    if (std::fabs(factor - 1.0) < 1e-16 || j > 100000) break;
  }
  return std::exp(log_sum);
}

// ---------------------------------------------------------------------------
// Ids

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

EntryId parse_entry_id(std::string_view text) {
  text = trim(text);
  EntryId out;
  const auto colon = text.find(':');
  out.family = lowercase(trim(text.substr(0, colon)));
  if (out.family.empty()) throw ParseError("empty family in entry id");
  if (colon == std::string_view::npos) return out;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected key=value in entry id, got '" + std::string(item) + "'");
    }
    const std::string key = lowercase(trim(item.substr(0, eq)));
    const std::string_view val = trim(item.substr(eq + 1));
    double v = 0.0;
    const auto res = std::from_chars(val.data(), val.data() + val.size(), v);
    if (key.empty() || res.ec != std::errc{} || res.ptr != val.data() + val.size()) {
      throw ParseError("bad parameter '" + std::string(item) + "' in entry id");
    }
    for (const auto& [k, _] : out.params) {
      if (k == key) throw ParseError("duplicate parameter '" + key + "' in entry id");
    }
    out.params.emplace_back(key, v);
  }
  return out;
}

CatalogEntry make_entry(std::string_view id) {
  const EntryId parsed = parse_entry_id(id);
  const std::string& fam = parsed.family;

  struct Spec {
    const char* family;
    std::vector<std::pair<std::string, double>> defaults;
  };
  static const std::vector<Spec> specs = {
      {"trivial", {}},
      {"stable", {{"alpha", 0.5}}},
      {"expcp", {{"c", 1.0}}},
      {"geomcp", {{"c", 0.1}, {"q", 0.5}}},
      {"gamma", {}},
      {"by451", {{"alpha", 0.5}, {"c", 2.0}}},
      {"by452", {{"alpha", 0.5}, {"b", 1.5}, {"c", 2.0}}},
      {"rou", {{"alpha", 0.5}, {"mu", 1.0}}},
  };
  const auto spec = std::find_if(specs.begin(), specs.end(),
                                 [&](const Spec& s) { return fam == s.family; });
  if (spec == specs.end()) throw ParseError("unknown family '" + fam + "'");

  auto values = spec->defaults;
  for (const auto& [key, v] : parsed.params) {
    auto it = std::find_if(values.begin(), values.end(),
                           [&](const auto& p) { return p.first == key; });
    if (it == values.end()) throw ParseError("family '" + fam + "' has no parameter '" + key + "'");
    it->second = v;
  }
  auto p = [&](std::size_t i) { return values[i].second; };

  if (fam == "trivial") return trivial_entry();
  if (fam == "stable") return stable_entry(p(0));
  if (fam == "expcp") return expcp_entry(p(0));
  if (fam == "geomcp") return geomcp_entry(p(0), p(1));
  if (fam == "gamma") return gamma_entry();
  if (fam == "by451") return by451_entry(p(0), p(1));
  if (fam == "by452") return by452_entry(p(0), p(1), p(2));
  return rou_entry(p(0), p(1));
}

std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out;
  out.push_back(trivial_entry());
  for (double a : {0.3, 0.5, 0.7}) out.push_back(stable_entry(a));
  for (double c : {1.0, 2.0}) out.push_back(expcp_entry(c));
  out.push_back(geomcp_entry(0.0, 0.5));
  out.push_back(geomcp_entry(0.1, 0.5));
  out.push_back(gamma_entry());
  out.push_back(by451_entry(0.5, 2.0));
  out.push_back(by452_entry(0.5, 1.5, 2.0));
  out.push_back(rou_entry(0.5, 1.0));   // 2 mu alpha = 1 and 2 mu (1 - alpha) = 1
  out.push_back(rou_entry(0.25, 2.0));  // 2 mu alpha = 1
  out.push_back(rou_entry(0.75, 2.0));  // 2 mu (1 - alpha) = 1
  out.push_back(rou_entry(0.3, 1.0));
  return out;
}

}  // namespace perpetua
