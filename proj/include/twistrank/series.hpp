#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "twistrank/curve.hpp"

namespace twistrank {

struct SumParams {
  double j = 1.0;      // height exponent, >= 0
  double k = 1.0;      // twist exponent, > 1/2
  long long N = 1;     // sup-norm box |u|,|v| <= N
  std::optional<WindowX> window;

  void validate() const;
};

// One truncated-series evaluation. `value` is the compensated sum; both
// signs of v are counted (a factor 2 over the canonical v > 0
// representatives), so term_count is even for the S/R series.
struct SumReport {
  std::string series;  // "S", "R", "R_lattice", "Q"
  long long curve_a = 0, curve_b = 0, curve_c = 0;
  double j = 0.0, k = 0.0;
  long long N = 0;                          // box bound (S/R routes)
  long long B = 0;                          // dd' bound (Q route)
  std::optional<std::string> window_str;
  std::optional<std::string> membership;    // Q route
  double value = 0.0;
  std::uint64_t term_count = 0;
  double abs_sum = 0.0;
  double kahan_error_bound = 0.0;           // term_count * eps * sum|terms|
  std::uint64_t excluded_count = 0;         // Q: triples failing membership
  std::uint64_t tie_ambiguous_count = 0;    // Q: tied minima disagreeing on membership
  unsigned threads = 1;
  std::optional<std::map<std::string, double>> breakdown;  // per-D or per-t

  bool operator==(const SumReport&) const = default;
};

// S(j,k,X) truncated to the box: sum of |s(F(u,v))|^-k h(u/v)^-j.
SumReport s_partial(const Curve& curve, const SumParams& params, unsigned threads = 0,
                    bool with_breakdown = false);

// R(j,k,X) truncated to the box. The inner t-sum over t^2 | F collapses to
// the exact divisor identity |s|^-k sum_{e|m} e^-2k with F = s m^2.
SumReport r_partial(const Curve& curve, const SumParams& params, unsigned threads = 0,
                    bool with_breakdown = false);

// [s_partial, 4^j s_partial]: the bracket the canonical-height sum over the
// same lifted points obeys once the naive/canonical height comparison holds
// (it can fail for finitely many small pairs).
struct TBounds {
  double low = 0.0;
  double high = 0.0;
  SumReport s_report;
};
TBounds t_bounds(const Curve& curve, const SumParams& params, unsigned threads = 0);

}  // namespace twistrank
