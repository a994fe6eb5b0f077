#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "twistrank/lattice.hpp"

namespace twistrank {

namespace rng {

// SplitMix64 finalizer; the whole random model is specified in terms of it
// so runs are reproducible across implementations (see README).
std::uint64_t mix(std::uint64_t z);

// substream key for the triple (alpha, d, d')
std::uint64_t triple_key(std::uint64_t seed, long long alpha, long long d, long long d_prime);

// draw #index of the keyed substream, uniform in [0, 1)
double unit_double(std::uint64_t key, std::uint64_t index);

}  // namespace rng

// the null model: lattices of area t^2 replaced by area-uniform random
// points in the annulus of radii C1 sqrt(t) and C2 t
struct AnnulusModel {
  double C1 = 0.5;
  double C2 = 1.5;
  std::uint64_t seed = 0;

  void validate() const;  // C1 < C2 keeps A_t nonempty for every t >= 1
};

// Frozen fits for the bundled reference curves; anything else is fitted at
// dd' <= 40 on the fly. C1 is clamped below C2 so the model is drawable at
// every t.
AnnulusModel default_annulus_model(const Curve& curve, std::uint64_t seed = 0);

struct ExperimentReport {
  long long curve_a = 0, curve_b = 0, curve_c = 0;
  long long B = 0;
  double C = 0.0;
  std::uint64_t count = 0;
  std::uint64_t triples = 0;  // triples with dd' < B considered
  bool is_model = false;
  double log4_reference = 0.0;                 // log^4 B
  std::optional<double> logr_reference;        // log^{r/2} B for a rank hint r
  std::uint64_t seed = 0;
  double C1 = 0.0, C2 = 0.0;                   // model constants (model runs)
  std::optional<std::string> membership;       // observed-count filter

  bool operator==(const ExperimentReport&) const = default;
};

// #{(alpha,d,d') : dd' < B, ||z|| <= C sqrt(dd')} with z drawn area-uniform
// in A_{dd'} from the triple's substream. Deterministic for a fixed seed and
// independent of the thread count.
ExperimentReport random_annulus_count(const Curve& curve, const AnnulusModel& model, long long B,
                                      double C, std::optional<double> rank_hint = std::nullopt,
                                      unsigned threads = 0);

// the observed counterpart: #{(alpha,d,d') : dd' < B, ||omega|| <= C sqrt(dd')},
// optionally filtered by a membership condition on omega
ExperimentReport observed_short_count(const Curve& curve, long long B, double C,
                                      std::optional<Membership> filter = std::nullopt,
                                      std::optional<double> rank_hint = std::nullopt,
                                      unsigned threads = 0);

// sum_{t<=x} 4^nu(t) (sieved)
std::uint64_t sum_4nu(long long x);

struct GrowthCheckpoint {
  long long x = 0;
  std::uint64_t sum_4nu = 0;
  double ratio_to_x_log3 = 0.0;  // sum / (x log^3 x)

  bool operator==(const GrowthCheckpoint&) const = default;
};

// partial sums of the heuristic bound: prefactor 1/(C1^{4k}(2k-1)) times
// sum_{t=2}^{T} 1/(t log^{j-3} t); the t = 1 term is excluded (log 1 = 0).
struct HeuristicBoundReport {
  double j = 0.0, k = 0.0, C1 = 0.0;
  long long T = 0;
  double prefactor = 0.0;
  double series_partial = 0.0;  // sum from t = 2 to T
  double bound = 0.0;           // prefactor * series_partial
  std::vector<GrowthCheckpoint> checkpoints;  // powers of 10 up to T, then T

  bool operator==(const HeuristicBoundReport&) const = default;
};

HeuristicBoundReport heuristic_bound_report(double j, double k, double C1, long long T);

// distribution of ||omega|| / sqrt(dd') over triples with dd' < B: the sum
// is dominated by omega near the inner edge, so the left tail is the
// interesting part
struct RatioHistogram {
  double lo = 0.0, hi = 0.0;
  std::vector<std::uint64_t> bins;
  std::uint64_t total = 0;
};
RatioHistogram omega_ratio_histogram(const Curve& curve, long long B, std::size_t bins = 20,
                                     std::optional<Membership> filter = std::nullopt,
                                     unsigned threads = 0);

}  // namespace twistrank
