#include "twistrank/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "twistrank/parallel.hpp"

namespace twistrank {

namespace rng {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t triple_key(std::uint64_t seed, long long alpha, long long d, long long d_prime) {
  std::uint64_t k = seed;
  k = mix(k + kGamma + static_cast<std::uint64_t>(alpha));
  k = mix(k + 2 * kGamma + static_cast<std::uint64_t>(d));
  k = mix(k + 3 * kGamma + static_cast<std::uint64_t>(d_prime));
  return k;
}

double unit_double(std::uint64_t key, std::uint64_t index) {
  std::uint64_t x = mix(key + (index + 1) * kGamma);
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace rng

void AnnulusModel::validate() const {
  if (!(C1 > 0.0) || !(C2 > 0.0)) throw std::domain_error("annulus model: radii must be positive");
  if (!(C1 < C2))
    throw std::domain_error("annulus model: C1 < C2 required (empty annulus at t = 1)");
}

AnnulusModel default_annulus_model(const Curve& curve, std::uint64_t seed) {
  AnnulusModel m;
  m.seed = seed;
  // frozen fits over dd' <= 40 (F(omega) != 0)
  if (curve.a() == 0 && curve.b() == -1 && curve.c() == 0) {
    m.C1 = 2.614064520945623;
    m.C2 = 1.0494045941401726;
  } else if (curve.a() == 0 && curve.b() == 0 && curve.c() == -2) {
    m.C1 = 0.99999999900000003;
    m.C2 = 1.0071090952491943;
  } else {
    auto fit = fit_annulus_constants(curve, 40);
    m.C1 = fit.C1;
    m.C2 = fit.C2;
  }
  // a drawable model needs a nonempty annulus at every t >= 1
  if (m.C1 >= m.C2) m.C1 = 0.999 * m.C2;
  return m;
}

namespace {

struct TripleList {
  std::vector<std::pair<long long, long long>> units;  // coprime (d, d'), dd' < B
  std::vector<RootSet> omegas;                         // indexed by d - 1
};

TripleList triples_below(const Curve& curve, long long B, unsigned threads) {
  TripleList out;
  long long dmax = B - 1;
  if (dmax >= 1) {
    out.omegas = par::indexed_map<RootSet>(
        static_cast<std::size_t>(dmax), threads,
        [&](std::size_t i) { return omega_d(curve, static_cast<long long>(i) + 1); });
    for (long long d = 1; d < B; ++d)
      for (long long dp = 1; d * dp < B; ++dp)
        if (std::gcd(d, dp) == 1) out.units.push_back({d, dp});
  }
  return out;
}

void check_experiment_pre(long long B, double C) {
  if (B < 2) throw std::domain_error("experiment: B must be >= 2");
  if (!(C > 0.0)) throw std::domain_error("experiment: C must be positive");
}

std::optional<double> logr_ref(std::optional<double> rank_hint, long long B) {
  if (!rank_hint) return std::nullopt;
  return std::pow(std::log(static_cast<double>(B)), *rank_hint / 2.0);
}

}  // namespace

ExperimentReport random_annulus_count(const Curve& curve, const AnnulusModel& model, long long B,
                                      double C, std::optional<double> rank_hint,
                                      unsigned threads) {
  check_experiment_pre(B, C);
  model.validate();
  auto list = triples_below(curve, B, threads);

  auto counts = par::indexed_map<std::pair<std::uint64_t, std::uint64_t>>(
      list.units.size(), threads, [&](std::size_t i) {
        auto [d, dp] = list.units[i];
        double t = static_cast<double>(d) * static_cast<double>(dp);
        double r1sq = model.C1 * model.C1 * t;
        double r2sq = model.C2 * model.C2 * t * t;
        double cut = C * std::sqrt(t);
        std::uint64_t hit = 0, seen = 0;
        for (long long alpha : list.omegas[static_cast<std::size_t>(d - 1)].residues) {
          std::uint64_t key = rng::triple_key(model.seed, alpha, d, dp);
          double u1 = rng::unit_double(key, 0);
          double r = std::sqrt(r1sq + u1 * (r2sq - r1sq));  // area-uniform radius
          (void)rng::unit_double(key, 1);                   // angle; irrelevant to the count
          ++seen;
          if (r <= cut) ++hit;
        }
        return std::make_pair(hit, seen);
      });

  ExperimentReport rep;
  rep.curve_a = curve.a();
  rep.curve_b = curve.b();
  rep.curve_c = curve.c();
  rep.B = B;
  rep.C = C;
  rep.is_model = true;
  rep.seed = model.seed;
  rep.C1 = model.C1;
  rep.C2 = model.C2;
  for (auto [hit, seen] : counts) {
    rep.count += hit;
    rep.triples += seen;
  }
  rep.log4_reference = std::pow(std::log(static_cast<double>(B)), 4.0);
  rep.logr_reference = logr_ref(rank_hint, B);
  return rep;
}

ExperimentReport observed_short_count(const Curve& curve, long long B, double C,
                                      std::optional<Membership> filter,
                                      std::optional<double> rank_hint, unsigned threads) {
  check_experiment_pre(B, C);
  auto list = triples_below(curve, B, threads);

  auto counts = par::indexed_map<std::pair<std::uint64_t, std::uint64_t>>(
      list.units.size(), threads, [&](std::size_t i) {
        auto [d, dp] = list.units[i];
        double t = static_cast<double>(d) * static_cast<double>(dp);
        double cutsq = C * C * t;
        std::uint64_t hit = 0, seen = 0;
        for (long long alpha : list.omegas[static_cast<std::size_t>(d - 1)].residues) {
          ReducedLattice rl = shortest_vectors(curve, TwistTriple{alpha, d, dp});
          if (filter) {
            bool pass = *filter == Membership::strict_psi ? rl.in_psi : rl.F_nonzero;
            if (!pass) continue;
          }
          ++seen;
          if (static_cast<double>(rl.norm_sq) <= cutsq) ++hit;
        }
        return std::make_pair(hit, seen);
      });

  ExperimentReport rep;
  rep.curve_a = curve.a();
  rep.curve_b = curve.b();
  rep.curve_c = curve.c();
  rep.B = B;
  rep.C = C;
  rep.is_model = false;
  if (filter) rep.membership = membership_name(*filter);
  for (auto [hit, seen] : counts) {
    rep.count += hit;
    rep.triples += seen;
  }
  rep.log4_reference = std::pow(std::log(static_cast<double>(B)), 4.0);
  rep.logr_reference = logr_ref(rank_hint, B);
  return rep;
}

namespace {

// nu(t) for t <= x by the additive sieve: t is prime iff untouched when
// reached
std::vector<std::uint8_t> nu_table(long long x) {
  std::vector<std::uint8_t> nu(static_cast<std::size_t>(x) + 1, 0);
  for (long long p = 2; p <= x; ++p) {
    if (nu[static_cast<std::size_t>(p)] != 0) continue;
    for (long long m = p; m <= x; m += p) nu[static_cast<std::size_t>(m)] += 1;
  }
  return nu;
}

constexpr long long kSieveLimit = 200'000'000;  // ~200 MB of nu table

}  // namespace

std::uint64_t sum_4nu(long long x) {
  if (x < 1) throw std::domain_error("sum_4nu: x must be >= 1");
  if (x > kSieveLimit) throw std::domain_error("sum_4nu: x beyond sieve limit");
  auto nu = nu_table(x);
  std::uint64_t total = 0;
  for (long long t = 1; t <= x; ++t) total += 1ull << (2 * nu[static_cast<std::size_t>(t)]);
  return total;
}

HeuristicBoundReport heuristic_bound_report(double j, double k, double C1, long long T) {
  if (T < 2) throw std::domain_error("heuristic_bound_report: T must be >= 2");
  if (!(k > 0.5)) throw std::domain_error("heuristic_bound_report: k must exceed 1/2");
  if (!(C1 > 0.0)) throw std::domain_error("heuristic_bound_report: C1 must be positive");
  if (T > kSieveLimit) throw std::domain_error("heuristic_bound_report: T beyond sieve limit");

  HeuristicBoundReport rep;
  rep.j = j;
  rep.k = k;
  rep.C1 = C1;
  rep.T = T;
  rep.prefactor = 1.0 / (std::pow(C1, 4.0 * k) * (2.0 * k - 1.0));

  par::KahanSum acc;
  for (long long t = 2; t <= T; ++t) {
    double lt = std::log(static_cast<double>(t));
    acc.add(1.0 / (static_cast<double>(t) * std::pow(lt, j - 3.0)));
  }
  rep.series_partial = acc.value();
  rep.bound = rep.prefactor * rep.series_partial;

  auto nu = nu_table(T);
  std::uint64_t running = 0;
  long long next_cp = 10;
  for (long long t = 1; t <= T; ++t) {
    running += 1ull << (2 * nu[static_cast<std::size_t>(t)]);
    bool at_cp = (t == next_cp) || (t == T);
    if (!at_cp) continue;
    if (t == next_cp) next_cp *= 10;
    double x = static_cast<double>(t);
    double denom = x * std::pow(std::log(x), 3.0);
    rep.checkpoints.push_back({t, running, denom > 0 ? static_cast<double>(running) / denom : 0.0});
  }
  return rep;
}

RatioHistogram omega_ratio_histogram(const Curve& curve, long long B, std::size_t bins,
                                     std::optional<Membership> filter, unsigned threads) {
  if (B < 2) throw std::domain_error("omega_ratio_histogram: B must be >= 2");
  if (bins == 0) throw std::domain_error("omega_ratio_histogram: need at least one bin");
  auto list = triples_below(curve, B, threads);

  auto ratios_per_unit = par::indexed_map<std::vector<double>>(
      list.units.size(), threads, [&](std::size_t i) {
        auto [d, dp] = list.units[i];
        double t = static_cast<double>(d) * static_cast<double>(dp);
        std::vector<double> out;
        for (long long alpha : list.omegas[static_cast<std::size_t>(d - 1)].residues) {
          ReducedLattice rl = shortest_vectors(curve, TwistTriple{alpha, d, dp});
          if (filter) {
            bool pass = *filter == Membership::strict_psi ? rl.in_psi : rl.F_nonzero;
            if (!pass) continue;
          }
          out.push_back(std::sqrt(static_cast<double>(rl.norm_sq) / t));
        }
        return out;
      });

  std::vector<double> ratios;
  for (const auto& r : ratios_per_unit) ratios.insert(ratios.end(), r.begin(), r.end());

  RatioHistogram hist;
  hist.bins.assign(bins, 0);
  if (ratios.empty()) return hist;
  hist.lo = *std::min_element(ratios.begin(), ratios.end());
  hist.hi = *std::max_element(ratios.begin(), ratios.end());
  double width = hist.hi > hist.lo ? (hist.hi - hist.lo) : 1.0;
  for (double r : ratios) {
    std::size_t idx = static_cast<std::size_t>((r - hist.lo) / width * static_cast<double>(bins));
    if (idx >= bins) idx = bins - 1;
    hist.bins[idx] += 1;
  }
  hist.total = ratios.size();
  return hist;
}

}  // namespace twistrank
