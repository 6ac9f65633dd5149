#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "perpetua/bernstein.hpp"
#include "perpetua/catalog.hpp"

namespace perpetua::mc {

using Rng = std::mt19937_64;

/// Generator for sample `index` of a run seeded with `seed`. Samples never
/// share a stream, so results do not depend on how samples are scheduled.
Rng substream(std::uint64_t seed, std::uint64_t index);

struct Drift {
  double rate = 1.0;
};

/// Jump sizes Exp(c).
struct ExponentialJumps {
  double c = 1.0;
};

/// Jump sizes n * step with P(n) = ratio^{n-1} (1 - ratio), n >= 1.
struct GeometricLatticeJumps {
  double step = 1.0;
  double ratio = 0.0;
};

struct CompoundPoisson {
  double rate = 1.0;
  std::variant<ExponentialJumps, GeometricLatticeJumps> jumps;
};

/// Positive alpha-stable with E exp(-s xi_l) = exp(-l s^alpha).
struct Stable {
  double alpha = 0.5;
};

struct GammaProcess {};

/// Inverse-CDF table for jumps of a Levy density restricted to (cutoff, inf).
class JumpTable {
 public:
  JumpTable(const LevyTriple& triple, double cutoff);
  double total_rate() const noexcept { return total_rate_; }
  /// Jump size for u in (0, 1).
  double quantile(double u) const;

 private:
  std::vector<double> log_x_;
  std::vector<double> log_tail_;  // log lambda((x, inf)), decreasing
  std::vector<Atom> atoms_;       // atoms above the cutoff
  double density_rate_ = 0.0;
  double total_rate_ = 0.0;
};

/// Jumps below `cutoff` are replaced by their mean rate, added to the drift;
/// jumps above are compound Poisson drawn from a JumpTable.
struct TruncatedLevy {
  double cutoff = 1e-4;
  double drift = 0.0;  // triple drift + small-jump mean
  std::shared_ptr<const JumpTable> table;
};

using Family = std::variant<Drift, CompoundPoisson, Stable, GammaProcess, TruncatedLevy>;

class SubordinatorModel {
 public:
  SubordinatorModel(std::string name, Family family, BernsteinFunction phi);

  static SubordinatorModel truncated_levy(std::string name, const LevyTriple& triple,
                                          double cutoff, BernsteinFunction phi);

  const std::string& name() const noexcept { return name_; }
  const Family& family() const noexcept { return family_; }
  const BernsteinFunction& phi() const noexcept { return phi_; }

 private:
  std::string name_;
  Family family_;
  BernsteinFunction phi_;
};

/// Simulation model mirroring a catalog entry. Throws UnsupportedError for
/// entries without a sampler (no Levy triple).
SubordinatorModel model_for(const CatalogEntry& entry, double cutoff = 1e-4);

/// One draw of xi_{dl}.
double sample_increment(const SubordinatorModel& model, double dl, Rng& rng);

/// Left-endpoint Riemann sum  sum_{i < L/dl} exp(-xi_{i dl}) dl.
///
/// Finite-activity paths (drift, compound Poisson, truncated Levy) are
/// simulated event by event; the sum over each jump-free stretch is a
/// geometric series, which reproduces the cell-by-cell scheme in law.
double sample_perpetuity(const SubordinatorModel& model, double dl, double L, Rng& rng);

/// Draw from a product-form law.
double sample_law(const ProductLaw& law, Rng& rng);

struct SimulationOptions {
  long n_samples = 100000;
  double dl = 1e-3;
  double L = 0.0;  // 0: smallest multiple of dl with exp(-L Phi(1)) < 1e-6
  std::uint64_t seed = 1;
  int workers = 0;  // 0: hardware concurrency capped by PERPETUA_THREADS
};

/// Smallest multiple of dl with exp(-L Phi(1)) < tail.
double default_horizon(const BernsteinFunction& phi, double dl, double tail = 1e-6);

/// Number of worker threads for `requested` (0 = automatic).
int resolve_workers(int requested);

struct PerpetuityEstimate {
  std::string entry;
  double r = 2.0;  // estimates E[I^{r-1}]
  double mean = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
  double dl = 0.0;
  double truncation_L = 0.0;
  double bias_bound = 0.0;
  std::uint64_t seed = 0;
};

/// Bound on |E[I^{r-1}] - E[I_L^{r-1}]| from truncating the integral at L,
/// using E[I_L-tail^p] = exp(-L Phi(p)) E[I^p]. For r = 2 this is
/// exp(-L Phi(1)) E[I].
double truncation_bias_bound(const BernsteinFunction& phi, double r, double L, double dl);

std::vector<PerpetuityEstimate> estimate_mellin_I(const SubordinatorModel& model,
                                                  std::span<const double> rs,
                                                  const SimulationOptions& opt);

PerpetuityEstimate estimate_mellin_I(const SubordinatorModel& model, double r,
                                     const SimulationOptions& opt);

/// The same estimate at dl, dl/2, ..., dl/2^(levels-1) with a common seed and
/// horizon, so discretisation bias can be read off.
std::vector<PerpetuityEstimate> refinement_study(const SubordinatorModel& model, double r,
                                                 const SimulationOptions& opt, int levels);

struct IncrementStats {
  double mean = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
};

IncrementStats increment_stats(const SubordinatorModel& model, double dl, long n,
                               std::uint64_t seed);

struct MomentCheck {
  int n = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double expected = 0.0;  // n!
  double z = 0.0;
};

struct FactorizationReport {
  std::string entry;
  long n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<MomentCheck> moments;
  double ks_statistic = 0.0;  // sup |F_n - F_exp|
  double ks_threshold = 0.0;  // 1.63 / sqrt(N), 1% level
  bool pass = false;          // every |z| < 4
};

/// Compare moments of I * R against n! for n = 1..4, with I simulated from
/// the entry's model and R drawn from its known law. Throws UnsupportedError
/// when the entry has no law for R or no simulation model.
FactorizationReport factorization_test(const CatalogEntry& entry, const SimulationOptions& opt);

}  // namespace perpetua::mc
