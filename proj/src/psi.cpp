#include "twistrank/psi.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "twistrank/parallel.hpp"

namespace twistrank {

using arith::to_mpz;

namespace detail {

void visit_stripe(const Curve& curve, long long N, long long v, const WindowX* window,
                  const std::function<void(long long, long long, const mpz_class&)>& fn) {
  const bool windowed = window && !window->covers_everything();
  mpz_class F;
  auto emit = [&](long long u) {
    if (windowed && !window->contains(u, v)) return;
    F = curve.F(u, v);
    if (F == 0) return;
    fn(u, v, F);
  };

  if (N <= kSieveCutoff) {
    for (long long u = -N; u <= N; ++u)
      if (std::gcd(u, v) == 1) emit(u);
    return;
  }

  // stripe sieve: mark u with a common factor with v
  std::vector<bool> blocked(static_cast<std::size_t>(2 * N + 1), false);
  auto mark = [&](long long p) {
    // smallest multiple of p >= -N is -(N/p)*p
    for (long long u = -(N / p) * p; u <= N; u += p) blocked[static_cast<std::size_t>(u + N)] = true;
  };
  long long rest = v;
  for (long long p = 2; p * p <= rest; ++p) {
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    mark(p);
  }
  if (rest > 1) mark(rest);
  for (long long u = -N; u <= N; ++u)
    if (!blocked[static_cast<std::size_t>(u + N)]) emit(u);
}

}  // namespace detail

std::vector<CoprimePair> enumerate_psi(const Curve& curve, long long N, const WindowX* window) {
  if (N < 1) throw std::domain_error("enumerate_psi: N must be >= 1");
  std::vector<CoprimePair> out;
  for (long long v = 1; v <= N; ++v)
    detail::visit_stripe(curve, N, v, window,
                         [&](long long u, long long vv, const mpz_class& F) {
                           out.push_back({u, vv, F});
                         });
  return out;
}

PairClass classify_pair(const Curve& curve, long long u, long long v) {
  if (v == 0 || std::gcd(u, v) != 1)
    throw std::domain_error("classify_pair: (u,v) must be reduced with v != 0");
  mpz_class F = curve.F(u, v);
  if (F == 0) throw std::domain_error("classify_pair: F(u,v) = 0, pair not in Psi");
  auto d = arith::squarefree_part(F);
  return {d.s, d.m};
}

TwistPoint lift_point(const Curve& curve, long long u, long long v) {
  if (v <= 0) throw std::domain_error("lift_point: canonical representative needs v > 0");
  PairClass cls = classify_pair(curve, u, v);
  TwistPoint pt;
  pt.D = cls.D;
  pt.x = mpq_class(to_mpz(u), to_mpz(v));
  mpq_canonicalize(pt.x.get_mpq_t());
  pt.y = mpq_class(cls.m, to_mpz(v) * to_mpz(v));
  mpq_canonicalize(pt.y.get_mpq_t());
  // the lift must land on the twist exactly
  if (mpq_class(pt.D) * pt.y * pt.y != curve.f_at(pt.x))
    throw std::logic_error("lift_point: curve equation failed");
  return pt;
}

namespace {

struct StripeHist {
  // D -> (count, witnesses), keyed in a deterministic order
  std::map<mpz_class, std::pair<std::uint64_t, std::vector<CoprimePair>>> by_d;
  std::uint64_t pairs = 0;
};

}  // namespace

DHistogram rank_mine(const Curve& curve, long long N, const WindowX* window, std::size_t top,
                     std::size_t witness_cap, unsigned threads) {
  if (N < 1) throw std::domain_error("rank_mine: N must be >= 1");

  auto stripes = par::indexed_map<StripeHist>(
      static_cast<std::size_t>(N), threads, [&](std::size_t idx) {
        long long v = static_cast<long long>(idx) + 1;
        StripeHist h;
        detail::visit_stripe(curve, N, v, window,
                             [&](long long u, long long vv, const mpz_class& F) {
                               auto sf = arith::squarefree_part(F);
                               auto& slot = h.by_d[sf.s];
                               slot.first += 1;
                               if (slot.second.size() < witness_cap)
                                 slot.second.push_back({u, vv, F});
                               h.pairs += 1;
                             });
        return h;
      });

  // merge in stripe (= v) order so witness lists follow enumeration order
  std::map<mpz_class, std::pair<std::uint64_t, std::vector<CoprimePair>>> merged;
  std::uint64_t total = 0;
  for (const auto& st : stripes) {
    total += st.pairs;
    for (const auto& [d, slot] : st.by_d) {
      auto& dst = merged[d];
      dst.first += slot.first;
      for (const auto& w : slot.second) {
        if (dst.second.size() >= witness_cap) break;
        dst.second.push_back(w);
      }
    }
  }

  DHistogram out;
  out.box = N;
  if (window) out.window_str = window->str();
  out.total_pairs = total;
  out.entries.reserve(merged.size());
  for (auto& [d, slot] : merged) out.entries.push_back({d, slot.first, std::move(slot.second)});
  std::sort(out.entries.begin(), out.entries.end(), [](const DEntry& x, const DEntry& y) {
    if (x.count != y.count) return x.count > y.count;
    mpz_class ax = abs(x.D), ay = abs(y.D);
    if (ax != ay) return ax < ay;
    return x.D > y.D;  // positive first
  });
  if (top > 0 && out.entries.size() > top) out.entries.resize(top);
  return out;
}

}  // namespace twistrank
