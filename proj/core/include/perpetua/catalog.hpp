#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "perpetua/bernstein.hpp"
#include "perpetua/measures.hpp"

namespace perpetua {

/// What the literature states about the four distributional properties of an
/// entry. Unset fields are not stated and are never compared.
struct ExpectedClassification {
  std::optional<bool> r_mid;
  std::optional<bool> i_mid;
  std::optional<bool> logR_sd;
  std::optional<bool> logI_sd;
};

/// A law of the product form  scale * X_1^{p_1} * ... * X_k^{p_k}  with
/// independent elementary factors. Enough to name every known law of I or R
/// in the catalog and to sample it.
class ProductLaw {
 public:
  enum class Kind {
    exponential,      // Exp(1)
    gamma,            // Gamma(shape = a)
    beta,             // Beta(a, b)
    positive_stable,  // E exp(-s tau) = exp(-s^a)
  };
  struct Factor {
    Kind kind;
    double a;
    double b;      // second beta parameter; unused otherwise
    double power;  // exponent applied to the draw
  };

  ProductLaw(double scale, std::vector<Factor> factors);

  /// Degenerate law at `scale`.
  static ProductLaw point(double scale) { return ProductLaw(scale, {}); }

  double scale() const noexcept { return scale_; }
  const std::vector<Factor>& factors() const noexcept { return factors_; }

  /// Readable identifier, e.g. "gamma(2)" or "0.5*gamma(0.5)^0.5".
  std::string id() const;

  /// E[X^{r-1}] from the factor Mellin transforms. DomainError if a factor
  /// moment does not exist.
  double mellin(double r) const;

 private:
  double scale_;
  std::vector<Factor> factors_;
};

/// One family member of the catalog with every closed form the literature
/// provides for it.
struct CatalogEntry {
  std::string id;      // canonical id, e.g. "stable:alpha=0.5"
  std::string family;  // "stable", "expcp", ...
  std::vector<std::pair<std::string, double>> params;
  BernsteinFunction function;

  std::function<double(double)> closed_R;  // r -> E[R^{r-1}]
  std::function<double(double)> closed_I;  // r -> E[I^{r-1}]
  std::optional<KappaMeasure> closed_kappa;
  std::optional<ProductLaw> known_law_I;
  std::optional<ProductLaw> known_law_R;
  ExpectedClassification expected;

  // Closed forms used by the convolution equations.
  std::optional<DensityFunction> density_I;   // theta
  std::optional<DensityFunction> density_R;   // zeta
  std::optional<DensityFunction> survival_R;  // eta
  std::function<double(double)> levy_tail;    // lambda-bar, when closed form
  std::optional<PotentialDensity> potential;  // rho

  std::string describe() const;
};

/// Parsed form of the id grammar  family[:key=value[,key=value]...].
struct EntryId {
  std::string family;
  std::vector<std::pair<std::string, double>> params;
};

EntryId parse_entry_id(std::string_view text);

/// Build an entry from its id. Throws ParseError for malformed ids or unknown
/// families and DomainError for out-of-range parameters.
CatalogEntry make_entry(std::string_view id);

/// Default parameterisations of every family, including both radial OU
/// special cases.
std::vector<CatalogEntry> catalog();

CatalogEntry trivial_entry();
CatalogEntry stable_entry(double alpha);
CatalogEntry expcp_entry(double c);
CatalogEntry geomcp_entry(double c, double q);
CatalogEntry gamma_entry();
CatalogEntry by451_entry(double alpha, double c);
CatalogEntry by452_entry(double alpha, double b, double c);
CatalogEntry rou_entry(double alpha, double mu);

/// Truncated infinite products for the geometric compound Poisson case,
/// stopped once a factor is within 1e-16 of 1.
double geomcp_R_qproduct(double c, double q, double r);
double geomcp_I_qproduct(double c, double q, double r);

/// Shortest round-trip decimal representation, used in canonical ids.
std::string format_number(double x);

}  // namespace perpetua
