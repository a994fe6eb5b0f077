#include "twistrank/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "twistrank/parallel.hpp"

namespace twistrank::arith {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kTrialBound = 10000;  // trial division bound

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialBound, false);
    std::vector<std::uint32_t> out;
    for (u64 i = 2; i < kTrialBound; ++i) {
      if (composite[i]) continue;
      out.push_back(static_cast<std::uint32_t>(i));
      for (u64 j = i * i; j < kTrialBound; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

u64 powmod_u64(u64 a, u64 e, u64 m) {
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

bool mr_witness_u64(u64 n, u64 a, u64 d, int s) {
  u64 x = powmod_u64(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < s; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return false;
  }
  return true;  // composite witness
}

// Deterministic for all 64-bit n with these bases.
constexpr u64 kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (u64 a : kMrBases)
    if (mr_witness_u64(n, a, d, s)) return false;
  return true;
}

u64 gcd_u64(u64 a, u64 b) {
  while (b) { u64 t = a % b; a = b; b = t; }
  return a;
}

// Brent's cycle variant of Pollard rho; x0 = 2 and c = 1, 2, 3, ... so the
// factor found is a deterministic function of n.
u64 brent_rho_u64(u64 n) {
  if ((n & 1) == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    u64 q = 1;
    int power = 1, lam = 0;
    auto step = [&](u64 v) { return (static_cast<u64>((u128)v * v % n) + c) % n; };
    while (d == 1) {
      if (power == lam) {
        x = y;
        power <<= 1;
        lam = 0;
      }
      y = step(y);
      ++lam;
      u64 diff = x > y ? x - y : y - x;
      if (diff == 0) break;
      q = mulmod_u64(q, diff, n);
      if (lam % 64 == 0) {
        d = gcd_u64(q, n);
        if (d != 1) break;
      }
    }
    if (d == 1) d = gcd_u64(q, n);
    if (d != 1 && d != n) return d;
    // backtrack one-by-one if the batched gcd jumped past the factor
    x = 2; y = 2;
    d = 1;
    u64 xs = 2;
    int pw = 1, l = 0;
    while (d == 1) {
      if (pw == l) { xs = y; pw <<= 1; l = 0; }
      y = step(y);
      ++l;
      u64 diff = xs > y ? xs - y : y - xs;
      if (diff == 0) break;
      d = gcd_u64(diff, n);
    }
    if (d != 1 && d != n) return d;
    // cycle collapsed for this c; try the next increment
  }
}

void factor_rec_u64(u64 n, std::map<u64, unsigned>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    ++out[n];
    return;
  }
  u64 d = brent_rho_u64(n);
  factor_rec_u64(d, out);
  factor_rec_u64(n / d, out);
}

bool mr_witness_mpz(const mpz_class& n, const mpz_class& a, const mpz_class& d, unsigned long s) {
  mpz_class x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  mpz_class nm1 = n - 1;
  if (x == 1 || x == nm1) return false;
  for (unsigned long i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == nm1) return false;
  }
  return true;
}

bool is_prime_mpz_large(const mpz_class& n) {
  static const mpz_class kMr12Limit("3317044064679887385961981");
  if (n < kMr12Limit) {
    mpz_class d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    for (u64 a : kMrBases) {
      if (mpz_cmp_ui(n.get_mpz_t(), static_cast<unsigned long>(a)) == 0) return true;
      if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(a))) return false;
      if (mr_witness_mpz(n, mpz_class(static_cast<unsigned long>(a)), d, s)) return false;
    }
    return true;
  }
  return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

// Brent rho over mpz, same deterministic seeding as the u64 path.
mpz_class brent_rho_mpz(const mpz_class& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class x = 2, y = 2, d = 1, q = 1, xs;
    long power = 1, lam = 0;
    auto step = [&](mpz_class& v) { v = (v * v + c) % n; };
    while (d == 1) {
      if (power == lam) { x = y; power <<= 1; lam = 0; }
      step(y);
      ++lam;
      mpz_class diff = x > y ? x - y : y - x;
      if (diff == 0) break;
      q = q * diff % n;
      if (lam % 64 == 0) {
        mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        if (d != 1) break;
      }
    }
    if (d == 1) mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
    if (d != 1 && d != n) return d;
    xs = 2; y = 2; d = 1;
    long pw = 1, l = 0;
    while (d == 1) {
      if (pw == l) { xs = y; pw <<= 1; l = 0; }
      step(y);
      ++l;
      mpz_class diff = xs > y ? xs - y : y - xs;
      if (diff == 0) break;
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != 1 && d != n) return d;
  }
}

void factor_rec_mpz(const mpz_class& n, std::map<mpz_class, unsigned>& out) {
  if (n == 1) return;
  if (is_prime_mpz_large(n)) {
    ++out[n];
    return;
  }
  mpz_class d = brent_rho_mpz(n);
  factor_rec_mpz(d, out);
  factor_rec_mpz(n / d, out);
}

}  // namespace

mpz_class Factorization::reconstruct() const {
  mpz_class r = sign;
  for (const auto& pp : factors) {
    mpz_class pe;
    mpz_pow_ui(pe.get_mpz_t(), pp.p.get_mpz_t(), pp.e);
    r *= pe;
  }
  return r;
}

Factorization factorize(const mpz_class& n) {
  if (n == 0) throw std::domain_error("factorize: n must be nonzero");
  Factorization out;
  out.n = n;
  out.sign = sgn(n) < 0 ? -1 : 1;
  mpz_class a = abs(n);
  if (a == 1) return out;

  if (a.fits_ulong_p() || mpz_sizeinbase(a.get_mpz_t(), 2) <= 63) {
    u64 v = mpz_get_ui(a.get_mpz_t());
    // mpz_get_ui truncates above 64 bits; the size check above prevents that
    std::map<u64, unsigned> m;
    for (std::uint32_t p : small_primes()) {
      if ((u64)p * p > v) break;
      while (v % p == 0) { v /= p; ++m[p]; }
    }
    if (v > 1) factor_rec_u64(v, m);
    for (const auto& [p, e] : m) out.factors.push_back({mpz_class(static_cast<unsigned long>(p)), e});
    return out;
  }

  std::map<mpz_class, unsigned> m;
  for (std::uint32_t p : small_primes()) {
    if (!mpz_divisible_ui_p(a.get_mpz_t(), p)) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(a.get_mpz_t(), p)) {
      mpz_divexact_ui(a.get_mpz_t(), a.get_mpz_t(), p);
      ++e;
    }
    m[mpz_class(static_cast<unsigned long>(p))] = e;
  }
  if (a > 1) factor_rec_mpz(a, m);
  for (const auto& [p, e] : m) out.factors.push_back({p, e});
  return out;
}

bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 63) return is_prime_u64(mpz_get_ui(n.get_mpz_t()));
  return is_prime_mpz_large(n);
}

SquarefreeDecomposition squarefree_from(const Factorization& f) {
  SquarefreeDecomposition out;
  out.s = f.sign;
  out.m = 1;
  for (const auto& pp : f.factors) {
    if (pp.e & 1) out.s *= pp.p;
    if (pp.e >= 2) {
      mpz_class ph;
      mpz_pow_ui(ph.get_mpz_t(), pp.p.get_mpz_t(), pp.e / 2);
      out.m *= ph;
    }
  }
  return out;
}

SquarefreeDecomposition squarefree_part(const mpz_class& n) {
  if (n == 0) throw std::domain_error("squarefree_part: n must be nonzero");
  return squarefree_from(factorize(n));
}

Factorization square_cofactor_factors(const Factorization& f) {
  Factorization out;
  out.sign = 1;
  out.n = 1;
  for (const auto& pp : f.factors) {
    if (pp.e >= 2) {
      out.factors.push_back({pp.p, pp.e / 2});
      mpz_class ph;
      mpz_pow_ui(ph.get_mpz_t(), pp.p.get_mpz_t(), pp.e / 2);
      out.n *= ph;
    }
  }
  return out;
}

double divisor_power_sum(const Factorization& m_factors, double w) {
  if (w <= 0) throw std::domain_error("divisor_power_sum: w must be positive");
  // multiplicative: prod_p (1 + p^-w + ... + p^-we)
  double total = 1.0;
  for (const auto& pp : m_factors.factors) {
    double pw = std::pow(mpz_get_d(pp.p.get_mpz_t()), -w);
    double geom = 1.0, term = 1.0;
    for (unsigned i = 0; i < pp.e; ++i) {
      term *= pw;
      geom += term;
    }
    total *= geom;
  }
  return total;
}

double divisor_power_sum(const mpz_class& m, double w) {
  if (m < 1) throw std::domain_error("divisor_power_sum: m must be >= 1");
  if (m == 1) {
    if (w <= 0) throw std::domain_error("divisor_power_sum: w must be positive");
    return 1.0;
  }
  return divisor_power_sum(factorize(m), w);
}

ZetaBracket zeta_bracket(double w, std::uint64_t M) {
  ZetaBracket out;
  par::KahanSum acc;
  // descending n: terms increase, which keeps the compensation effective
  for (std::uint64_t n = M; n >= 1; --n) acc.add(std::pow(static_cast<double>(n), -w));
  out.partial = acc.value();
  out.tail = std::pow(static_cast<double>(M), 1.0 - w) / (w - 1.0);
  return out;
}

double zeta_even(double w, double tol) {
  if (!(w > 1.0)) throw std::domain_error("zeta_even: w must exceed 1 (series diverges)");
  if (!(tol > 0.0)) throw std::domain_error("zeta_even: tol must be positive");
  // With M terms and the integral tail added, the error is at most M^-w.
  double m_needed = std::pow(tol, -1.0 / w);
  double m_floor = std::max(16.0, 2.0 * w);
  double m_real = std::max(m_floor, std::ceil(m_needed));
  if (m_real > 4.0e9)
    throw std::domain_error("zeta_even: tol unreachable by direct summation at this w");
  std::uint64_t M = static_cast<std::uint64_t>(m_real);
  ZetaBracket b = zeta_bracket(w, M);
  return b.partial + b.tail;
}

}  // namespace twistrank::arith
