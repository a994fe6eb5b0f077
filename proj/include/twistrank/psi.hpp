#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "twistrank/curve.hpp"

namespace twistrank {

// (u, v) with gcd(u,v) = 1, v > 0, F(u,v) != 0: the canonical representative
// of a projective x-value.
struct CoprimePair {
  long long u = 0;
  long long v = 1;
  mpz_class F;

  bool operator==(const CoprimePair& o) const { return u == o.u && v == o.v; }
};

// All canonical pairs with |u| <= N, 0 < v <= N, u/v in window (if given),
// ordered v ascending then u ascending.
std::vector<CoprimePair> enumerate_psi(const Curve& curve, long long N,
                                       const WindowX* window = nullptr);

// F(u,v) = D * m^2 with D squarefree. Throws when F = 0 ("not in Psi") or
// (u,v) is not reduced.
struct PairClass {
  mpz_class D;
  mpz_class m;
};
PairClass classify_pair(const Curve& curve, long long u, long long v);

// The rational point (u/v, sqrt(F/D)/v^2) on D y^2 = f(x); y >= 0.
struct TwistPoint {
  mpz_class D;
  mpq_class x;
  mpq_class y;
};
TwistPoint lift_point(const Curve& curve, long long u, long long v);

struct DEntry {
  mpz_class D;
  std::uint64_t count = 0;
  std::vector<CoprimePair> witnesses;  // first few, in enumeration order
};

struct DHistogram {
  std::vector<DEntry> entries;  // sorted: count desc, |D| asc, D > 0 first
  long long box = 0;
  std::optional<std::string> window_str;
  std::uint64_t total_pairs = 0;
};

// Count how often each squarefree D = s(F(u,v)) arises over the box; twists
// with many small points float up the list.
DHistogram rank_mine(const Curve& curve, long long N, const WindowX* window = nullptr,
                     std::size_t top = 0 /* 0 = all */, std::size_t witness_cap = 64,
                     unsigned threads = 0);

namespace detail {

// Visit the canonical pairs of one v-stripe in u-ascending order.
// Coprimality is filtered by a per-stripe sieve above the small-box cutoff,
// by plain gcd below it.
void visit_stripe(const Curve& curve, long long N, long long v, const WindowX* window,
                  const std::function<void(long long u, long long v, const mpz_class& F)>& fn);

inline constexpr long long kSieveCutoff = 1000;

}  // namespace detail

}  // namespace twistrank
