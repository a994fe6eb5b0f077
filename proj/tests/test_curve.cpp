#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "twistrank/curve.hpp"

using namespace twistrank;
using arith::squarefree_part;
using arith::to_mpz;

TEST_CASE("make_curve validates and refines roots") {
  Curve cn(0, -1, 0);  // x^3 - x
  REQUIRE(cn.real_root_count() == 3);
  CHECK(cn.e_min() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(cn.e_max() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cn.real_roots()[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  Curve c2(0, 0, -2);  // x^3 - 2
  REQUIRE(c2.real_root_count() == 1);
  CHECK(c2.e_min() == c2.e_max());
  CHECK(c2.e_min() == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(Curve(0, 0, 0), "repeated root", std::domain_error);
  CHECK_THROWS_AS(Curve(-3, 3, -1), std::domain_error);  // (x-1)^3
  for (double e : cn.real_roots()) CHECK(std::abs(cn.f_real(e)) < 1e-9);
}

TEST_CASE("eval_F examples and identities") {
  Curve cn(0, -1, 0);
  CHECK(cn.F(2, 1) == 6);
  CHECK(cn.F(0, 1) == 0);
  Curve c2(0, 0, -2);
  CHECK(c2.F(3, 1) == 25);

  // F(u,v) = v^4 f(u/v) in exact rational arithmetic, F(-u,-v) = F(u,v),
  // and for x^3 - x the product form u v (u+v)(u-v)
  for (long long u = -12; u <= 12; ++u) {
    for (long long v = -12; v <= 12; ++v) {
      if (v != 0) {
        mpq_class x(to_mpz(u), to_mpz(v));
        mpq_canonicalize(x.get_mpq_t());
        mpq_class v4 = mpq_class(to_mpz(v)) * to_mpz(v) * to_mpz(v) * to_mpz(v);
        CHECK(mpq_class(cn.F(to_mpz(u), to_mpz(v))) == v4 * cn.f_at(x));
        CHECK(mpq_class(c2.F(to_mpz(u), to_mpz(v))) == v4 * c2.f_at(x));
      }
      CHECK(cn.F(-u, -v) == cn.F(u, v));
      CHECK(c2.F(-u, -v) == c2.F(u, v));
      CHECK(cn.F(u, v) == to_mpz(u) * to_mpz(v) * to_mpz(u + v) * to_mpz(u - v));
    }
  }
}

TEST_CASE("s(f(u/v)) = s(F(u,v)) via exact rationals") {
  Curve cn(0, -1, 0);
  Curve c2(0, 0, -2);
  for (const Curve& cv : {cn, c2}) {
    for (long long u = -10; u <= 10; ++u) {
      for (long long v = 1; v <= 10; ++v) {
        if (std::gcd(u, v) != 1) continue;
        mpz_class F = cv.F(u, v);
        if (F == 0) continue;
        mpq_class x(to_mpz(u), to_mpz(v));
        mpq_canonicalize(x.get_mpq_t());
        mpq_class fx = cv.f_at(x);
        // squarefree part of a rational p/q is s(p*q)
        mpz_class pq = fx.get_num() * fx.get_den();
        CHECK(squarefree_part(pq).s == squarefree_part(F).s);
      }
    }
  }
}

TEST_CASE("naive height") {
  CHECK(naive_height(2, 3) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  CHECK(naive_height(1, 2) == 1.0);
  CHECK(naive_height(10, 3) == doctest::Approx(std::log(10.0)).epsilon(1e-15));
  CHECK(naive_height(0, 1) == 1.0);
  CHECK(naive_height(-7, 2) == doctest::Approx(std::log(7.0)).epsilon(1e-15));
  CHECK_THROWS_AS(naive_height(2, 0), std::domain_error);
  CHECK_THROWS_AS(naive_height(2, 4), std::domain_error);
}

TEST_CASE("default broad window") {
  Curve cn(0, -1, 0);
  WindowX w = cn.real_root_count() ? default_broad_window(cn) : WindowX::everything();
  REQUIRE(w.intervals().size() == 2);
  CHECK(w.is_broad(cn));
  CHECK(w.contains(mpq_class(-5, 2)));   // -2.5 in (-3, -2)
  CHECK(w.contains(mpq_class(5, 2)));    // 2.5 in (2, 3)
  CHECK(!w.contains(mpq_class(0)));
  CHECK(!w.contains(mpq_class(2)));      // open endpoint (up to snapping)

  Curve c2(0, 0, -2);
  WindowX w2 = default_broad_window(c2);
  CHECK(w2.is_broad(c2));
  double e = std::cbrt(2.0);
  CHECK(w2.contains(mpq_class(0)));  // 0 in (e-2, e-1) ~ (-0.74, 0.26)
  CHECK(w2.contains(mpq_class(3)));  // 3 in (e+1, e+2) ~ (2.26, 3.26)
  CHECK(!w2.contains(mpq_class(1)));
  // f nonzero on the closure: every interval stays clear of every real root
  for (const Curve& cv : {cn, c2}) {
    WindowX win = default_broad_window(cv);
    for (const auto& iv : win.intervals()) {
      for (double root : cv.real_roots()) {
        CHECK(std::abs(iv.lo.get_d() - root) > 0.5);
        CHECK(std::abs(iv.hi.get_d() - root) > 0.5);
      }
    }
  }
  (void)e;
}

TEST_CASE("window parsing and membership") {
  WindowX w = WindowX::parse("-3..-2,2..3");
  CHECK(w.intervals().size() == 2);
  CHECK(w.contains(mpq_class(-5, 2)));
  CHECK(!w.contains(mpq_class(-2)));
  CHECK(w.str() == "-3..-2,2..3");

  WindowX winf = WindowX::parse("-inf..0,1..inf");
  CHECK(winf.contains(mpq_class(-1000000)));
  CHECK(winf.contains(mpq_class(1000000)));
  CHECK(!winf.contains(mpq_class(1)));
  Curve cn(0, -1, 0);
  CHECK(winf.is_broad(cn));
  CHECK(!WindowX::parse("0..1").is_broad(cn));
  CHECK(WindowX::everything().is_broad(cn));
  CHECK(WindowX::everything().covers_everything());

  WindowX dec = WindowX::parse("-0.5..1/3");
  CHECK(dec.contains(mpq_class(0)));
  CHECK(dec.contains(mpq_class(-1, 4)));
  CHECK(!dec.contains(mpq_class(1, 3)));

  CHECK_THROWS_AS(WindowX::parse("2..1"), std::invalid_argument);
  CHECK_THROWS_AS(WindowX::parse("0..2,1..3"), std::invalid_argument);
  CHECK_THROWS_AS(WindowX::parse("abc..1"), std::invalid_argument);
  CHECK_THROWS_AS(WindowX::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(WindowX::parse("inf..2"), std::invalid_argument);
}
