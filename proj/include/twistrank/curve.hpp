#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "twistrank/arith.hpp"

namespace twistrank {

// y^2 = f(x) with f(x) = x^3 + a x^2 + b x + c, integer coefficients and
// distinct complex roots. Immutable after construction.
class Curve {
 public:
  // Throws std::domain_error("repeated root") when disc(f) = 0.
  Curve(long long a, long long b, long long c);

  long long a() const { return a_; }
  long long b() const { return b_; }
  long long c() const { return c_; }
  const mpz_class& discriminant() const { return disc_; }

  int real_root_count() const { return static_cast<int>(roots_.size()); }
  const std::vector<double>& real_roots() const { return roots_; }  // ascending
  double e_min() const { return roots_.front(); }
  double e_max() const { return roots_.back(); }

  // F(u, v) = v(u^3 + a u^2 v + b u v^2 + c v^3) = v^4 f(u/v), exact.
  mpz_class F(const mpz_class& u, const mpz_class& v) const;
  mpz_class F(long long u, long long v) const;

  // exact rational evaluation of f
  mpq_class f_at(const mpq_class& x) const;
  double f_real(double x) const;

  bool operator==(const Curve& o) const { return a_ == o.a_ && b_ == o.b_ && c_ == o.c_; }

 private:
  long long a_, b_, c_;
  mpz_class disc_;
  std::vector<double> roots_;
};

// naive height max{1, log|u|, log|v|} of u/v in lowest terms; u = 0 is
// admitted (the log|u| leg is dropped). Throws when v = 0 or gcd(u,v) != 1.
double naive_height(long long u, long long v);

// open interval (lo, hi) with rational or infinite endpoints
struct Interval {
  bool lo_infinite = false;
  bool hi_infinite = false;
  mpq_class lo;
  mpq_class hi;
};

// finite union of disjoint open intervals on the real line
class WindowX {
 public:
  static WindowX everything();
  static WindowX from_intervals(std::vector<Interval> ivs);  // sorts, validates
  // "lo..hi,lo..hi" with endpoints integer, decimal, p/q, or (-)inf
  static WindowX parse(const std::string& text);

  bool contains(const mpq_class& x) const;
  bool contains(long long u, long long v) const;  // x = u/v

  // nontrivial intersection with both (e_max, inf) and (-inf, e_min)
  bool is_broad(const Curve& curve) const;
  bool covers_everything() const;

  const std::vector<Interval>& intervals() const { return ivs_; }
  std::string str() const;

 private:
  std::vector<Interval> ivs_;
};

// (e_min - 2, e_min - 1) u (e_max + 1, e_max + 2), endpoints snapped outward
// by the root tolerance; broad and bounded, with f nonzero on the closure.
WindowX default_broad_window(const Curve& curve);

// tolerance used when refining real roots and snapping window endpoints
inline constexpr double kRootTolerance = 1e-12;

}  // namespace twistrank
