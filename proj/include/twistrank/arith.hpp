#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace twistrank::arith {

// gmpxx has no long long constructor; this platform is LP64 so long is wide
// enough.
inline mpz_class to_mpz(long long x) { return mpz_class(static_cast<long>(x)); }

struct PrimePower {
  mpz_class p;
  unsigned e = 0;
};

// n = sign * prod p_i^{e_i}, primes strictly increasing.
struct Factorization {
  mpz_class n;
  int sign = 1;
  std::vector<PrimePower> factors;

  mpz_class reconstruct() const;
  // number of distinct prime divisors
  unsigned nu() const { return static_cast<unsigned>(factors.size()); }
};

// Deterministic: trial division by primes < 10^4, then Brent's rho with a
// fixed increment sequence. Throws std::domain_error on n = 0.
Factorization factorize(const mpz_class& n);

// Deterministic Miller-Rabin (12 fixed bases, exact below 3.3e24; GMP's
// test beyond that).
bool is_prime(const mpz_class& n);

// n = s * m^2 with s squarefree; s carries the sign of n, m > 0.
struct SquarefreeDecomposition {
  mpz_class s;
  mpz_class m;
};

SquarefreeDecomposition squarefree_part(const mpz_class& n);
SquarefreeDecomposition squarefree_from(const Factorization& f);

// Factorization of m where n = s * m^2 (exponents halved, sign dropped).
Factorization square_cofactor_factors(const Factorization& f);

// sum_{e | m} e^{-w}, for m >= 1, w > 0.
double divisor_power_sum(const mpz_class& m, double w);
double divisor_power_sum(const Factorization& m_factors, double w);

// partial <= zeta(w) <= partial + tail, tail = M^(1-w)/(w-1).
struct ZetaBracket {
  double partial = 0.0;
  double tail = 0.0;
};
ZetaBracket zeta_bracket(double w, std::uint64_t M);

// zeta(w) within tol: direct summation to M plus the integral tail bound.
// Throws std::domain_error for w <= 1.
double zeta_even(double w, double tol);

}  // namespace twistrank::arith
