#include "perpetua/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>

#include "perpetua/errors.hpp"
#include "perpetua/mellin.hpp"
#include "perpetua/quadrature.hpp"

namespace perpetua::mc {

namespace {

constexpr long kChunk = 1024;
constexpr int kTablePointsPerDecade = 64;

// Once xi exceeds this level the remaining cells add at most e^{-60} L, far
// below the resolution of the running sum (which is at least dl).
constexpr double kNegligibleLevel = 60.0;

constexpr std::uint64_t kLawStreamTag = 0x9E3779B97F4A7C15ULL;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double uniform_open(Rng& rng) {
  // (0, 1): 53 random bits, offset by half an ulp.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double exp1(Rng& rng) { return -std::log(uniform_open(rng)); }

// Kanter's representation of the positive stable law with E exp(-s tau) = exp(-s^a).
double positive_stable(double a, Rng& rng) {
  const double u = uniform_open(rng);
  const double e = exp1(rng);
  const double pu = std::numbers::pi * u;
  const double A = std::pow(std::sin(a * pu) / std::sin(pu), 1.0 / (1.0 - a)) *
                   std::sin((1.0 - a) * pu) / std::sin(a * pu);
  return std::pow(A / e, (1.0 - a) / a);
}

double gamma_draw(double shape, Rng& rng) {
  std::gamma_distribution<double> g(shape, 1.0);
  return g(rng);
}

long poisson_draw(double mean, Rng& rng) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<long> p(mean);
  return p(rng);
}

double jump_draw(const std::variant<ExponentialJumps, GeometricLatticeJumps>& jumps, Rng& rng) {
  return std::visit(overloaded{
                        [&](const ExponentialJumps& j) { return exp1(rng) / j.c; },
                        [&](const GeometricLatticeJumps& j) {
                          if (j.ratio <= 0.0) return j.step;
                          std::geometric_distribution<long> g(1.0 - j.ratio);
                          return j.step * static_cast<double>(g(rng) + 1);
                        },
                    },
                    jumps);
}

// Event-driven Riemann sum for a path with drift `drift` and compound Poisson
// jumps of total rate `rate`. Cells i with i dl >= tau see a jump at tau.
template <class JumpFn>
double event_driven_sum(double drift, double rate, JumpFn&& jump, double dl, long cells,
                        Rng& rng) {
  const double step = drift * dl;
  const double denom = -std::expm1(-step);
  double sum = 0.0;
  double jumps = 0.0;
  long i0 = 0;
  double tau = 0.0;
  while (i0 < cells) {
    long i1 = cells;
    if (rate > 0.0) {
      tau += exp1(rng) / rate;
      const double c = std::ceil(tau / dl);
      if (c < static_cast<double>(cells)) i1 = static_cast<long>(c);
    }
    if (i1 > i0) {
      const double level = jumps + step * static_cast<double>(i0);
      const double n = static_cast<double>(i1 - i0);
      const double geom = step > 0.0 ? -std::expm1(-step * n) / denom : n;
      sum += std::exp(-level) * geom * dl;
      i0 = i1;
    }
    if (i0 >= cells) break;
    jumps += jump(rng);
    if (jumps + step * static_cast<double>(i0) > kNegligibleLevel) break;
  }
  return sum;
}

template <class IncFn>
double cell_sum(IncFn&& increment, double dl, long cells, Rng& rng) {
  double sum = 0.0;
  double xi = 0.0;
  for (long i = 0; i < cells; ++i) {
    sum += std::exp(-xi) * dl;
    xi += increment(rng);
    if (xi > kNegligibleLevel) break;
  }
  return sum;
}

long cell_count(double dl, double L) {
  if (!(dl > 0.0)) throw DomainError("dl must be > 0");
  if (!(L > 0.0)) throw DomainError("L must be > 0");
  const double m = L / dl;
  const double rounded = std::round(m);
  if (std::fabs(m - rounded) > 1e-9 * std::max(1.0, m)) {
    throw DomainError("L must be a multiple of dl");
  }
  return static_cast<long>(rounded);
}

// Running mean and centred second moment (Welford), merged with Chan's rule.
struct Moments {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    const long total = n + o.n;
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / static_cast<double>(total);
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) /
                     static_cast<double>(total);
    n = total;
  }
  double std_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

// Runs body(chunk_index, begin, end) over [0, n) in chunks of kChunk. Each
// chunk writes only its own slot, so results do not depend on scheduling.
template <class Body>
void for_chunks(long n, int workers, Body&& body) {
  const long chunks = (n + kChunk - 1) / kChunk;
  std::atomic<long> next{0};
  auto run = [&]() {
    for (long c = next++; c < chunks; c = next++) {
      body(c, c * kChunk, std::min(n, (c + 1) * kChunk));
    }
  };
  const int w = static_cast<int>(std::min<long>(workers, chunks));
  if (w <= 1) {
    run();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(w));
  for (int i = 0; i < w; ++i) pool.emplace_back(run);
  for (auto& t : pool) t.join();
}

double horizon_for(const SubordinatorModel& model, const SimulationOptions& opt) {
  return opt.L > 0.0 ? opt.L : default_horizon(model.phi(), opt.dl);
}

}  // namespace

Rng substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

// ---------------------------------------------------------------------------
// JumpTable

JumpTable::JumpTable(const LevyTriple& triple, double cutoff) {
  if (!(cutoff > 0.0)) throw DomainError("jump table cutoff must be > 0");
  for (const Atom& a : triple.atoms()) {
    if (a.location > cutoff) {
      atoms_.push_back(a);
      total_rate_ += a.mass;
    }
  }
  if (triple.has_density()) {
    auto dens = [&triple](double x) { return triple.density(x); };
    density_rate_ = quad::integrate_to_infinity(dens, cutoff).value;
    // Extend the table until the remaining tail is negligible.
    double x_max = cutoff;
    double tail = density_rate_;
    while (tail > 1e-14 * density_rate_ && x_max < 1e6) {
      x_max *= 10.0;
      tail = quad::integrate_to_infinity(dens, x_max).value;
    }
    const int decades = static_cast<int>(std::lround(std::log10(x_max / cutoff)));
    const int points = decades * kTablePointsPerDecade + 1;
    log_x_.resize(static_cast<std::size_t>(points));
    log_tail_.resize(static_cast<std::size_t>(points));
    std::vector<double> tails(static_cast<std::size_t>(points));
    const double lc = std::log(cutoff);
    const double dlx = std::log(10.0) / kTablePointsPerDecade;
    for (int i = 0; i < points; ++i) log_x_[std::size_t(i)] = lc + dlx * i;
    tails.back() = tail;
    for (int i = points - 2; i >= 0; --i) {
      const double a = std::exp(log_x_[std::size_t(i)]);
      const double b = std::exp(log_x_[std::size_t(i) + 1]);
      tails[std::size_t(i)] = tails[std::size_t(i) + 1] + quad::integrate(dens, a, b, 1e-12).value;
    }
    density_rate_ = tails.front();
    for (int i = 0; i < points; ++i) {
      log_tail_[std::size_t(i)] = std::log(std::max(tails[std::size_t(i)], 1e-300));
    }
    total_rate_ += density_rate_;
  }
  if (!(total_rate_ > 0.0)) throw DomainError("Levy measure has no mass above the cutoff");
}

double JumpTable::quantile(double u) const {
  double v = u * total_rate_;
  for (const Atom& a : atoms_) {
    if (v < a.mass) return a.location;
    v -= a.mass;
  }
  if (log_x_.empty()) return atoms_.back().location;
  // Solve tail(x) = target on the log-log table; linear in each segment.
  const double target = std::log(std::max(density_rate_ - v, 1e-300));
  auto it = std::lower_bound(log_tail_.begin(), log_tail_.end(), target,
                             [](double a, double b) { return a > b; });
  std::size_t hi = static_cast<std::size_t>(it - log_tail_.begin());
  if (hi == 0) return std::exp(log_x_.front());
  if (hi >= log_tail_.size()) hi = log_tail_.size() - 1;
  const std::size_t lo = hi - 1;
  const double span = log_tail_[hi] - log_tail_[lo];
  const double w = span != 0.0 ? (target - log_tail_[lo]) / span : 0.0;
  return std::exp(log_x_[lo] + w * (log_x_[hi] - log_x_[lo]));
}

// ---------------------------------------------------------------------------
// Models

SubordinatorModel::SubordinatorModel(std::string name, Family family, BernsteinFunction phi)
    : name_(std::move(name)), family_(std::move(family)), phi_(std::move(phi)) {
  std::visit(overloaded{
                 [](const Drift& d) {
                   if (!(d.rate > 0.0)) throw DomainError("drift rate must be > 0");
                 },
                 [](const CompoundPoisson& cp) {
                   if (!(cp.rate > 0.0)) throw DomainError("jump rate must be > 0");
                 },
                 [](const Stable& s) {
                   if (!(s.alpha > 0.0 && s.alpha < 1.0)) {
                     throw DomainError("stable index must lie in (0, 1)");
                   }
                 },
                 [](const GammaProcess&) {},
                 [](const TruncatedLevy& t) {
                   if (!t.table) throw DomainError("truncated Levy model needs a jump table");
                 },
             },
             family_);
}

SubordinatorModel SubordinatorModel::truncated_levy(std::string name, const LevyTriple& triple,
                                                    double cutoff, BernsteinFunction phi) {
  TruncatedLevy t;
  t.cutoff = cutoff;
  t.drift = triple.drift() + triple.small_jump_mean(cutoff, 1e-10);
  t.table = std::make_shared<const JumpTable>(triple, cutoff);
  return SubordinatorModel(std::move(name), t, std::move(phi));
}

SubordinatorModel model_for(const CatalogEntry& entry, double cutoff) {
  const auto param = [&entry](const char* key) {
    for (const auto& [k, v] : entry.params) {
      if (k == key) return v;
    }
    throw UnsupportedError(entry.id + ": missing parameter " + key);
  };
  const std::string& fam = entry.family;
  if (fam == "trivial") return SubordinatorModel(entry.id, Drift{1.0}, entry.function);
  if (fam == "stable") return SubordinatorModel(entry.id, Stable{param("alpha")}, entry.function);
  if (fam == "expcp") {
    return SubordinatorModel(entry.id, CompoundPoisson{1.0, ExponentialJumps{param("c")}},
                             entry.function);
  }
  if (fam == "geomcp") {
    const double q = param("q");
    return SubordinatorModel(
        entry.id, CompoundPoisson{1.0, GeometricLatticeJumps{-std::log(q), param("c") / q}},
        entry.function);
  }
  if (fam == "gamma") return SubordinatorModel(entry.id, GammaProcess{}, entry.function);
  if (entry.function.levy()) {
    return SubordinatorModel::truncated_levy(entry.id, *entry.function.levy(), cutoff,
                                             entry.function);
  }
  throw UnsupportedError(entry.id + ": no Levy triple, cannot simulate");
}

double sample_increment(const SubordinatorModel& model, double dl, Rng& rng) {
  if (!(dl > 0.0)) throw DomainError("dl must be > 0");
  return std::visit(
      overloaded{
          [&](const Drift& d) { return d.rate * dl; },
          [&](const CompoundPoisson& cp) {
            const long n = poisson_draw(cp.rate * dl, rng);
            double s = 0.0;
            for (long i = 0; i < n; ++i) s += jump_draw(cp.jumps, rng);
            return s;
          },
          [&](const Stable& s) {
            return std::pow(dl, 1.0 / s.alpha) * positive_stable(s.alpha, rng);
          },
          [&](const GammaProcess&) { return gamma_draw(dl, rng); },
          [&](const TruncatedLevy& t) {
            const long n = poisson_draw(t.table->total_rate() * dl, rng);
            double s = t.drift * dl;
            for (long i = 0; i < n; ++i) s += t.table->quantile(uniform_open(rng));
            return s;
          },
      },
      model.family());
}

double sample_perpetuity(const SubordinatorModel& model, double dl, double L, Rng& rng) {
  const long cells = cell_count(dl, L);
  return std::visit(
      overloaded{
          [&](const Drift& d) {
            const double step = d.rate * dl;
            return dl * -std::expm1(-step * static_cast<double>(cells)) / -std::expm1(-step);
          },
          [&](const CompoundPoisson& cp) {
            return event_driven_sum(
                0.0, cp.rate, [&cp](Rng& g) { return jump_draw(cp.jumps, g); }, dl, cells, rng);
          },
          [&](const Stable& s) {
            const double scale = std::pow(dl, 1.0 / s.alpha);
            return cell_sum([&](Rng& g) { return scale * positive_stable(s.alpha, g); }, dl,
                            cells, rng);
          },
          [&](const GammaProcess&) {
            std::gamma_distribution<double> g(dl, 1.0);
            return cell_sum([&](Rng& r) { return g(r); }, dl, cells, rng);
          },
          [&](const TruncatedLevy& t) {
            const JumpTable& table = *t.table;
            return event_driven_sum(
                t.drift, table.total_rate(),
                [&table](Rng& g) { return table.quantile(uniform_open(g)); }, dl, cells, rng);
          },
      },
      model.family());
}

double sample_law(const ProductLaw& law, Rng& rng) {
  double out = law.scale();
  for (const auto& f : law.factors()) {
    double x = 1.0;
    switch (f.kind) {
      case ProductLaw::Kind::exponential: x = exp1(rng); break;
      case ProductLaw::Kind::gamma: x = gamma_draw(f.a, rng); break;
      case ProductLaw::Kind::beta: {
        const double a = gamma_draw(f.a, rng);
        const double b = gamma_draw(f.b, rng);
        x = a / (a + b);
        break;
      }
      case ProductLaw::Kind::positive_stable: x = positive_stable(f.a, rng); break;
    }
    out *= f.power == 1.0 ? x : std::pow(x, f.power);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Estimation

double default_horizon(const BernsteinFunction& phi, double dl, double tail) {
  if (!(dl > 0.0)) throw DomainError("dl must be > 0");
  const double p1 = phi(1.0);
  double cells = std::ceil(std::log(1.0 / tail) / (p1 * dl));
  while (std::exp(-cells * dl * p1) >= tail) cells += 1.0;
  return cells * dl;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("PERPETUA_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

double truncation_bias_bound(const BernsteinFunction& phi, double r, double L, double dl) {
  const double p = r - 1.0;
  if (p == 0.0) return 0.0;
  if (p > 0.0) {
    const double moment = I_gamma_ratio(phi, r).value;
    if (p >= 1.0) return p * std::exp(-L * phi(p) / p) * moment;
    return std::exp(-L * phi(p)) * moment;
  }
  // I_L >= dl, so I_L^p - I^p <= |p| dl^{p-1} (I - I_L).
  const double mean = I_gamma_ratio(phi, 2.0).value;
  return -p * std::pow(dl, p - 1.0) * std::exp(-L * phi(1.0)) * mean;
}

std::vector<PerpetuityEstimate> estimate_mellin_I(const SubordinatorModel& model,
                                                  std::span<const double> rs,
                                                  const SimulationOptions& opt) {
  if (opt.n_samples < 2) throw DomainError("need at least two samples");
  for (double r : rs) {
    if (!(r > 0.0)) throw DomainError("estimate_mellin_I requires r > 0");
  }
  const double L = horizon_for(model, opt);
  cell_count(opt.dl, L);
  const long chunks = (opt.n_samples + kChunk - 1) / kChunk;
  std::vector<std::vector<Moments>> partial(static_cast<std::size_t>(chunks),
                                            std::vector<Moments>(rs.size()));
  for_chunks(opt.n_samples, resolve_workers(opt.workers), [&](long c, long begin, long end) {
    auto& acc = partial[static_cast<std::size_t>(c)];
    for (long i = begin; i < end; ++i) {
      Rng rng = substream(opt.seed, static_cast<std::uint64_t>(i));
      const double I = sample_perpetuity(model, opt.dl, L, rng);
      for (std::size_t k = 0; k < rs.size(); ++k) acc[k].add(std::pow(I, rs[k] - 1.0));
    }
  });

  std::vector<PerpetuityEstimate> out;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    Moments total;
    for (const auto& chunk : partial) total.merge(chunk[k]);
    PerpetuityEstimate e;
    e.entry = model.name();
    e.r = rs[k];
    e.mean = total.mean;
    e.std_error = total.std_error();
    e.n_samples = total.n;
    e.dl = opt.dl;
    e.truncation_L = L;
    e.bias_bound = truncation_bias_bound(model.phi(), rs[k], L, opt.dl);
    e.seed = opt.seed;
    out.push_back(e);
  }
  return out;
}

PerpetuityEstimate estimate_mellin_I(const SubordinatorModel& model, double r,
                                     const SimulationOptions& opt) {
  const double rs[] = {r};
  return estimate_mellin_I(model, rs, opt).front();
}

std::vector<PerpetuityEstimate> refinement_study(const SubordinatorModel& model, double r,
                                                 const SimulationOptions& opt, int levels) {
  if (levels < 1) throw DomainError("refinement_study needs levels >= 1");
  SimulationOptions o = opt;
  o.L = horizon_for(model, opt);
  std::vector<PerpetuityEstimate> out;
  for (int k = 0; k < levels; ++k) {
    o.dl = std::ldexp(opt.dl, -k);
    out.push_back(estimate_mellin_I(model, r, o));
  }
  return out;
}

IncrementStats increment_stats(const SubordinatorModel& model, double dl, long n,
                               std::uint64_t seed) {
  if (n < 2) throw DomainError("need at least two samples");
  Moments m;
  for (long i = 0; i < n; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    m.add(sample_increment(model, dl, rng));
  }
  return {m.mean, m.std_error(), m.n};
}

FactorizationReport factorization_test(const CatalogEntry& entry, const SimulationOptions& opt) {
  if (!entry.known_law_R) throw UnsupportedError(entry.id + ": no sampler for the law of R");
  if (opt.n_samples < 2) throw DomainError("need at least two samples");
  const SubordinatorModel model = model_for(entry);
  const ProductLaw& law_R = *entry.known_law_R;
  const double L = horizon_for(model, opt);
  cell_count(opt.dl, L);

  constexpr int kMoments = 4;
  const long n = opt.n_samples;
  std::vector<double> products(static_cast<std::size_t>(n));
  const long chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::array<Moments, kMoments>> partial(static_cast<std::size_t>(chunks));
  for_chunks(n, resolve_workers(opt.workers), [&](long c, long begin, long end) {
    auto& acc = partial[static_cast<std::size_t>(c)];
    for (long i = begin; i < end; ++i) {
      Rng rng_I = substream(opt.seed, static_cast<std::uint64_t>(i));
      Rng rng_R = substream(opt.seed ^ kLawStreamTag, static_cast<std::uint64_t>(i));
      const double p = sample_perpetuity(model, opt.dl, L, rng_I) * sample_law(law_R, rng_R);
      products[static_cast<std::size_t>(i)] = p;
      double power = 1.0;
      for (int k = 0; k < kMoments; ++k) {
        power *= p;
        acc[static_cast<std::size_t>(k)].add(power);
      }
    }
  });

  FactorizationReport rep;
  rep.entry = entry.id;
  rep.n_samples = n;
  rep.seed = opt.seed;
  rep.pass = true;
  double factorial = 1.0;
  for (int k = 0; k < kMoments; ++k) {
    Moments total;
    for (const auto& chunk : partial) total.merge(chunk[static_cast<std::size_t>(k)]);
    factorial *= k + 1;
    MomentCheck mc;
    mc.n = k + 1;
    mc.mean = total.mean;
    mc.std_error = total.std_error();
    mc.expected = factorial;
    mc.z = mc.std_error > 0.0 ? (mc.mean - factorial) / mc.std_error : 0.0;
    if (!(std::fabs(mc.z) < 4.0)) rep.pass = false;
    rep.moments.push_back(mc);
  }

  std::sort(products.begin(), products.end());
  double ks = 0.0;
  for (long i = 0; i < n; ++i) {
    const double F = -std::expm1(-products[static_cast<std::size_t>(i)]);
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    ks = std::max({ks, std::fabs(F - lo), std::fabs(hi - F)});
  }
  rep.ks_statistic = ks;
  rep.ks_threshold = 1.63 / std::sqrt(static_cast<double>(n));
  return rep;
}

}  // namespace perpetua::mc
