#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "twistrank/arith.hpp"

using namespace twistrank::arith;

namespace {

// trial-division oracle, independent of the library's rho path
std::vector<std::pair<long long, unsigned>> trial_factor(long long n) {
  std::vector<std::pair<long long, unsigned>> out;
  long long v = n < 0 ? -n : n;
  for (long long p = 2; p * p <= v; ++p) {
    unsigned e = 0;
    while (v % p == 0) { v /= p; ++e; }
    if (e) out.push_back({p, e});
  }
  if (v > 1) out.push_back({v, 1});
  return out;
}

long long squarefree_oracle(long long n) {
  long long s = n < 0 ? -1 : 1;
  for (auto [p, e] : trial_factor(n))
    if (e & 1) s *= p;
  return s;
}

// simple deterministic generator for property tests
struct Lcg {
  std::uint64_t st;
  explicit Lcg(std::uint64_t s) : st(s) {}
  std::uint64_t next() {
    st = st * 6364136223846793005ull + 1442695040888963407ull;
    return st >> 11;
  }
  long long range(long long lo, long long hi) {  // inclusive
    return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

}  // namespace

TEST_CASE("factorize small examples") {
  auto f = factorize(24);
  REQUIRE(f.factors.size() == 2);
  CHECK(f.sign == 1);
  CHECK(f.factors[0].p == 2);
  CHECK(f.factors[0].e == 3);
  CHECK(f.factors[1].p == 3);
  CHECK(f.factors[1].e == 1);
  CHECK(f.reconstruct() == 24);

  auto one = factorize(1);
  CHECK(one.factors.empty());
  CHECK(one.sign == 1);
  CHECK(one.reconstruct() == 1);

  auto g = factorize(9991);
  REQUIRE(g.factors.size() == 2);
  CHECK(g.factors[0].p == 97);
  CHECK(g.factors[1].p == 103);

  CHECK_THROWS_AS(factorize(0), std::domain_error);
}

TEST_CASE("factorize matches trial division and reconstructs") {
  Lcg rng(12345);
  for (int i = 0; i < 300; ++i) {
    long long n = rng.range(-2'000'000, 2'000'000);
    if (n == 0) continue;
    auto f = factorize(to_mpz(n));
    CHECK(f.reconstruct() == to_mpz(n));
    auto oracle = trial_factor(n);
    REQUIRE(f.factors.size() == oracle.size());
    for (size_t j = 0; j < oracle.size(); ++j) {
      CHECK(f.factors[j].p == to_mpz(oracle[j].first));
      CHECK(f.factors[j].e == oracle[j].second);
      CHECK(is_prime(f.factors[j].p));
    }
    // primes strictly increasing
    for (size_t j = 1; j < f.factors.size(); ++j) CHECK(f.factors[j - 1].p < f.factors[j].p);
  }
}

TEST_CASE("factorize large semiprime deterministically") {
  mpz_class p("1000003"), q("1000033");
  auto f = factorize(p * q);
  REQUIRE(f.factors.size() == 2);
  CHECK(f.factors[0].p == p);
  CHECK(f.factors[1].p == q);
  // beyond 64 bits
  mpz_class big = mpz_class("12345678901234567890123456789");
  auto g = factorize(big);
  CHECK(g.reconstruct() == big);
  for (const auto& pp : g.factors) CHECK(is_prime(pp.p));
}

TEST_CASE("squarefree_part examples") {
  auto d = squarefree_part(24);
  CHECK(d.s == 6);
  CHECK(d.m == 2);
  d = squarefree_part(1);
  CHECK(d.s == 1);
  CHECK(d.m == 1);
  d = squarefree_part(-8);
  CHECK(d.s == -2);
  CHECK(d.m == 2);
  CHECK_THROWS_AS(squarefree_part(0), std::domain_error);
}

TEST_CASE("squarefree part: multiplicativity on coprime pairs and square invariance") {
  Lcg rng(777);
  int done = 0;
  while (done < 200) {
    long long a = rng.range(2, 1'000'000);
    long long b = rng.range(2, 1'000'000);
    if (std::gcd(a, b) != 1) continue;
    ++done;
    auto sa = squarefree_part(to_mpz(a)), sb = squarefree_part(to_mpz(b)), sab = squarefree_part(to_mpz(a) * to_mpz(b));
    CHECK(sab.s == sa.s * sb.s);
    CHECK(sa.s == to_mpz(squarefree_oracle(a)));
    CHECK(sb.s == to_mpz(squarefree_oracle(b)));
  }
  for (int i = 0; i < 100; ++i) {
    long long n = rng.range(-100000, 100000);
    long long k = rng.range(1, 500);
    if (n == 0) continue;
    CHECK(squarefree_part(to_mpz(n) * to_mpz(k) * to_mpz(k)).s == squarefree_part(to_mpz(n)).s);
  }
}

TEST_CASE("nu bounded by log2") {
  Lcg rng(99);
  for (int i = 0; i < 200; ++i) {
    long long d = rng.range(2, 5'000'000);
    auto f = factorize(to_mpz(d));
    CHECK(static_cast<double>(f.nu()) <= std::log2(static_cast<double>(d)) + 1e-9);
  }
}

TEST_CASE("divisor_power_sum examples and oracle") {
  CHECK(divisor_power_sum(mpz_class(1), 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(divisor_power_sum(mpz_class(2), 2.0) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(divisor_power_sum(mpz_class(6), 2.0) ==
        doctest::Approx(1.0 + 0.25 + 1.0 / 9.0 + 1.0 / 36.0).epsilon(1e-14));
  CHECK_THROWS_AS(divisor_power_sum(mpz_class(0), 2.0), std::domain_error);
  CHECK_THROWS_AS(divisor_power_sum(mpz_class(4), 0.0), std::domain_error);

  // explicit divisor-enumeration oracle
  Lcg rng(31337);
  for (int i = 0; i < 50; ++i) {
    long long m = rng.range(1, 20000);
    double w = 0.5 + 0.1 * static_cast<double>(rng.range(1, 40));
    double direct = 0;
    for (long long e = 1; e <= m; ++e)
      if (m % e == 0) direct += std::pow(static_cast<double>(e), -w);
    CHECK(divisor_power_sum(to_mpz(m), w) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(divisor_power_sum(to_mpz(m), w) >= 1.0);
  }
}

TEST_CASE("zeta_even known constants") {
  const double pi = 3.14159265358979323846;
  CHECK(zeta_even(2.0, 1e-10) == doctest::Approx(pi * pi / 6.0).epsilon(1e-10));
  CHECK(zeta_even(4.0, 1e-10) == doctest::Approx(pi * pi * pi * pi / 90.0).epsilon(1e-10));
  CHECK(zeta_even(3.0, 1e-10) == doctest::Approx(1.2020569031595943).epsilon(1e-10));
  CHECK_THROWS_AS(zeta_even(1.0, 1e-6), std::domain_error);
  CHECK_THROWS_AS(zeta_even(0.5, 1e-6), std::domain_error);
}

TEST_CASE("zeta bracketing at multiple M and tolerance ladder") {
  const double z2 = 3.14159265358979323846 * 3.14159265358979323846 / 6.0;
  for (std::uint64_t M : {16ull, 100ull, 1000ull, 100000ull}) {
    auto b = zeta_bracket(2.0, M);
    CHECK(b.partial <= z2);
    CHECK(b.partial + b.tail >= z2);
  }
  double prev_err = 1.0;
  for (double tol : {1e-4, 1e-6, 1e-8, 1e-10}) {
    double err = std::abs(zeta_even(2.0, tol) - z2);
    CHECK(err <= tol);
    CHECK(err <= prev_err + 1e-16);
    prev_err = err;
  }
}
