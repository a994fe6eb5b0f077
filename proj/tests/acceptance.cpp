// Acceptance suite: ten end-to-end criteria with pinned scales and
// tolerances, one pass/fail line each. Exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "twistrank/heuristics.hpp"
#include "twistrank/lattice.hpp"
#include "twistrank/psi.hpp"
#include "twistrank/series.hpp"

using namespace twistrank;
using arith::to_mpz;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int idx, const char* name, bool pass, double secs, const std::string& detail = "") {
  std::printf("%s  %2d. %s (%.2fs)%s%s\n", pass ? "PASS" : "FAIL", idx, name, secs,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++failures;
}

const Curve& congruent() {
  static Curve c(0, -1, 0);
  return c;
}
const Curve& cube2() {
  static Curve c(0, 0, -2);
  return c;
}

bool in_lattice(const TwistTriple& tr, long long u, long long v) {
  long long d2 = tr.d * tr.d, dp2 = tr.d_prime * tr.d_prime;
  if (v % dp2 != 0) return false;
  long long r = (u % d2 - tr.alpha % d2 * (v % d2)) % d2;
  return ((r % d2) + d2) % d2 == 0;
}

// 1. per-term divisor identity at N = 100, k in {1, 1.5}, rel err <= 1e-12
void criterion1() {
  Timer t;
  bool pass = true;
  std::string detail;
  auto pairs = enumerate_psi(congruent(), 100);
  for (const auto& p : pairs) {
    unsigned long long a = mpz_get_ui(mpz_class(abs(p.F)).get_mpz_t());
    std::vector<unsigned long long> ts;
    for (unsigned long long tt = 1; tt * tt <= a; ++tt)
      if (a % (tt * tt) == 0) ts.push_back(tt);
    auto fac = arith::factorize(p.F);
    auto sf = arith::squarefree_from(fac);
    auto mf = arith::square_cofactor_factors(fac);
    for (double k : {1.0, 1.5}) {
      double direct = 0.0;
      for (unsigned long long tt : ts)
        direct += std::pow(static_cast<double>(tt), 2.0 * k) *
                  std::pow(static_cast<double>(a), -k);
      double fused = std::pow(std::abs(sf.s.get_d()), -k) * arith::divisor_power_sum(mf, 2.0 * k);
      if (std::abs(direct - fused) > 1e-12 * std::abs(direct)) {
        pass = false;
        detail = "mismatch at (" + std::to_string(p.u) + "," + std::to_string(p.v) + ")";
      }
    }
  }
  double secs = t.seconds();
  if (secs >= 5.0) {
    pass = false;
    detail += " runtime over 5s";
  }
  report(1, "per-term divisor identity (N=100, k in {1,1.5}, 1e-12)", pass, secs, detail);
}

// 2. sandwich S <= R <= zeta(2k) S for (j,k) in {1,2}x{1,1.5}, N = 200
void criterion2() {
  Timer t;
  bool pass = true;
  std::string detail;
  for (const Curve* cv : {&congruent(), &cube2()}) {
    for (double j : {1.0, 2.0}) {
      for (double k : {1.0, 1.5}) {
        SumParams p{j, k, 200, std::nullopt};
        double S = s_partial(*cv, p).value;
        double R = r_partial(*cv, p).value;
        double z = arith::zeta_even(2.0 * k, 1e-10);
        if (!(S <= R && R <= z * S)) {
          pass = false;
          detail = "violated at j=" + std::to_string(j) + " k=" + std::to_string(k);
        }
      }
    }
  }
  double secs = t.seconds();
  if (secs >= 30.0) {
    pass = false;
    detail += " runtime over 30s";
  }
  report(2, "S <= R <= zeta(2k) S (N=200, both curves)", pass, secs, detail);
}

// 3. r_via_lattices == r_partial within 1e-12 relative at N = 60
void criterion3() {
  Timer t;
  bool pass = true;
  std::string detail;
  for (const Curve* cv : {&congruent(), &cube2()}) {
    SumParams p{1.0, 1.0, 60, std::nullopt};
    double direct = r_partial(*cv, p).value;
    double grouped = r_via_lattices(*cv, p).value;
    if (std::abs(direct - grouped) > 1e-12 * std::abs(direct)) {
      pass = false;
      char buf[128];
      std::snprintf(buf, sizeof buf, "direct=%.17g grouped=%.17g", direct, grouped);
      detail = buf;
    }
  }
  double secs = t.seconds();
  if (secs >= 60.0) {
    pass = false;
    detail += " runtime over 60s";
  }
  report(3, "lattice regrouping equals direct R (N=60, both curves)", pass, secs, detail);
}

// 4. partition: every t <= 30 over the N = 100 box, zero violations
void criterion4() {
  Timer t;
  bool pass = true;
  std::string detail;
  const Curve& cv = congruent();
  auto pairs = enumerate_psi(cv, 100);
  std::map<long long, RootSet> omega_cache;
  for (long long tt = 1; tt <= 30 && pass; ++tt) {
    mpz_class t2 = to_mpz(tt) * to_mpz(tt);
    std::vector<TwistTriple> triples;
    for (long long d = 1; d <= tt; ++d) {
      if (tt % d != 0 || std::gcd(d, tt / d) != 1) continue;
      auto it = omega_cache.find(d);
      if (it == omega_cache.end()) it = omega_cache.emplace(d, omega_d(cv, d)).first;
      for (long long alpha : it->second.residues) triples.push_back({alpha, d, tt / d});
    }
    std::set<std::pair<long long, long long>> covered;
    for (const auto& tr : triples) {
      for (const auto& p : pairs) {
        if (!in_lattice(tr, p.u, p.v)) continue;
        if (!covered.insert({p.u, p.v}).second) {
          pass = false;
          detail = "overlap at t=" + std::to_string(tt);
        }
        if (!mpz_divisible_p(p.F.get_mpz_t(), t2.get_mpz_t())) {
          pass = false;
          detail = "lattice member without t^2 | F at t=" + std::to_string(tt);
        }
      }
    }
    for (const auto& p : pairs) {
      if (!mpz_divisible_p(p.F.get_mpz_t(), t2.get_mpz_t())) continue;
      auto tr = decompose_pair(cv, p.u, p.v, tt);
      if (tr.d * tr.d_prime != tt || !in_lattice(tr, p.u, p.v) ||
          !covered.count({p.u, p.v})) {
        pass = false;
        detail = "decompose/coverage failure at t=" + std::to_string(tt);
      }
      // alpha in Omega_d
      auto it = omega_cache.find(tr.d);
      if (it == omega_cache.end()) it = omega_cache.emplace(tr.d, omega_d(cv, tr.d)).first;
      if (!std::binary_search(it->second.residues.begin(), it->second.residues.end(), tr.alpha)) {
        pass = false;
        detail = "alpha not in Omega_d at t=" + std::to_string(tt);
      }
    }
  }
  report(4, "triple decomposition partitions {t^2 | F} (t<=30, N=100)", pass, t.seconds(),
         detail);
}

// 5. omega_d equals exhaustive search for d <= 60, both curves
void criterion5() {
  Timer t;
  bool pass = true;
  std::string detail;
  for (const Curve* cv : {&congruent(), &cube2()}) {
    for (long long d = 1; d <= 60; ++d) {
      auto fast = omega_d(*cv, d);
      std::vector<long long> slow;
      mpz_class d2 = to_mpz(d) * to_mpz(d);
      for (long long a = 0; a < d * d; ++a) {
        mpz_class fa = to_mpz(a) * to_mpz(a) * to_mpz(a) +
                       to_mpz(cv->a()) * to_mpz(a) * to_mpz(a) + to_mpz(cv->b()) * to_mpz(a) +
                       to_mpz(cv->c());
        if (mpz_divisible_p(fa.get_mpz_t(), d2.get_mpz_t())) slow.push_back(a);
      }
      if (fast.residues != slow) {
        pass = false;
        detail = "d=" + std::to_string(d);
      }
    }
  }
  // singular-lift spot checks
  if (omega_d(congruent(), 2).residues != std::vector<long long>{0, 1, 3}) pass = false;
  if (omega_d(congruent(), 3).residues != std::vector<long long>{0, 1, 8}) pass = false;
  if (omega_d(congruent(), 6).residues.size() != 9) pass = false;
  report(5, "Omega_d matches exhaustive search (d<=60, both curves)", pass, t.seconds(), detail);
}

// 6. Lagrange-Gauss minimum equals brute force for dd' <= 40; Hermite bound
void criterion6() {
  Timer t;
  bool pass = true;
  std::string detail;
  const double hermite = 2.0 / std::sqrt(3.0);
  for (const Curve* cv : {&congruent(), &cube2()}) {
    for (long long d = 1; d <= 40 && pass; ++d) {
      for (long long dp = 1; d * dp <= 40 && pass; ++dp) {
        if (std::gcd(d, dp) != 1) continue;
        for (long long alpha : omega_d(*cv, d).residues) {
          TwistTriple tr{alpha, d, dp};
          auto rl = shortest_vectors(*cv, tr);
          long long R = 2 * d * dp;
          unsigned long long best = ~0ull;
          for (long long u = -R; u <= R; ++u)
            for (long long v = -R; v <= R; ++v)
              if ((u || v) && in_lattice(tr, u, v))
                best = std::min(best, static_cast<unsigned long long>(u * u + v * v));
          if (rl.norm_sq != best ||
              static_cast<double>(rl.norm_sq) > hermite * static_cast<double>(d * dp) *
                                                    static_cast<double>(d * dp)) {
            pass = false;
            detail = "(alpha,d,d')=(" + std::to_string(alpha) + "," + std::to_string(d) + "," +
                     std::to_string(dp) + ")";
          }
        }
      }
    }
  }
  report(6, "reduction equals brute-force minimum, Hermite bound (dd'<=40)", pass, t.seconds(),
         detail);
}

// 7. product formula for s(F) over the N = 300 box, zero violations
void criterion7() {
  Timer t;
  bool pass = true;
  std::string detail;
  for (const auto& p : enumerate_psi(congruent(), 300)) {
    mpz_class product = arith::squarefree_part(to_mpz(p.u)).s *
                        arith::squarefree_part(to_mpz(p.v)).s *
                        arith::squarefree_part(to_mpz(p.u + p.v)).s *
                        arith::squarefree_part(to_mpz(p.u - p.v)).s;
    if (arith::squarefree_part(product).s != arith::squarefree_part(p.F).s) {
      pass = false;
      detail = "(" + std::to_string(p.u) + "," + std::to_string(p.v) + ")";
      break;
    }
  }
  report(7, "s(F) = s(u)s(v)s(u+v)s(u-v) mod squares (N=300)", pass, t.seconds(), detail);
}

// 8. twist-mining facts over the N = 500 box
void criterion8() {
  Timer t;
  bool pass = true;
  std::string detail;
  auto hist = rank_mine(congruent(), 500);
  std::map<long long, std::uint64_t> counts;
  for (const auto& e : hist.entries)
    if (e.D.fits_slong_p()) counts[e.D.get_si()] = e.count;
  auto expect = [&](long long D, std::uint64_t at_least, const char* what) {
    if (counts[D] < at_least) {
      pass = false;
      detail += std::string(what) + " ";
    }
  };
  if (counts[1] != 0 || counts[2] != 0 || counts[3] != 0) {
    pass = false;
    detail += "rank-0 twist appeared ";
  }
  expect(5, 1, "D=5");
  expect(6, 4, "D=6");
  expect(7, 1, "D=7");
  // the named witnesses classify as promised
  if (classify_pair(congruent(), -4, 5).D != 5) pass = false;
  if (classify_pair(congruent(), 2, 1).D != 6 || classify_pair(congruent(), 3, 1).D != 6 ||
      classify_pair(congruent(), -1, 2).D != 6 || classify_pair(congruent(), -1, 3).D != 6)
    pass = false;
  if (classify_pair(congruent(), 25, 7).D != 7) pass = false;
  // every emitted point satisfies D y^2 = f(x) exactly
  for (const auto& e : hist.entries) {
    for (const auto& w : e.witnesses) {
      TwistPoint pt = lift_point(congruent(), w.u, w.v);
      if (mpq_class(pt.D) * pt.y * pt.y != congruent().f_at(pt.x)) {
        pass = false;
        detail += "bad point ";
      }
    }
  }
  double secs = t.seconds();
  if (secs >= 60.0) {
    pass = false;
    detail += " runtime over 60s";
  }
  report(8, "twist-mining facts (N=500: D=1,2,3 absent; 5,6,7 present)", pass, secs, detail);
}

// 9. Q truncations: exact unit value, zero case, monotone in B
void criterion9() {
  Timer t;
  bool pass = true;
  std::string detail;
  auto q1 = q_partial(cube2(), 1.0, 1.0, 1, Membership::strict_psi);
  if (q1.value != 1.0) {
    pass = false;
    detail = "q(x^3-2, B=1) != 1.0";
  }
  for (Membership m : {Membership::strict_psi, Membership::F_nonzero}) {
    if (q_partial(congruent(), 1.0, 1.0, 1, m).value != 0.0) {
      pass = false;
      detail = "q(x^3-x, B=1) != 0";
    }
  }
  for (const Curve* cv : {&congruent(), &cube2()}) {
    double prev = -1.0;
    for (long long B = 1; B <= 40; ++B) {
      double q = q_partial(*cv, 1.0, 1.0, B, Membership::strict_psi).value;
      if (q < prev) {
        pass = false;
        detail = "not monotone at B=" + std::to_string(B);
      }
      prev = q;
    }
  }
  report(9, "Q truncations: unit value, zero case, monotone to B=40", pass, t.seconds(), detail);
}

// 10. determinism: thread-count independence, seeded reproducibility, 4^nu
void criterion10() {
  Timer t;
  bool pass = true;
  std::string detail;

  SumParams p{1.5, 1.0, 60, std::nullopt};
  for (const Curve* cv : {&congruent(), &cube2()}) {
    auto s1 = s_partial(*cv, p, 1, true), s4 = s_partial(*cv, p, 4, true);
    auto r1 = r_partial(*cv, p, 1, true), r4 = r_partial(*cv, p, 4, true);
    auto l1 = r_via_lattices(*cv, p, 1, true), l4 = r_via_lattices(*cv, p, 4, true);
    auto q1 = q_partial(*cv, 1.0, 1.0, 20, Membership::strict_psi, 1, true);
    auto q4 = q_partial(*cv, 1.0, 1.0, 20, Membership::strict_psi, 4, true);
    if (s1.value != s4.value || *s1.breakdown != *s4.breakdown) pass = false;
    if (r1.value != r4.value || *r1.breakdown != *r4.breakdown) pass = false;
    if (l1.value != l4.value || *l1.breakdown != *l4.breakdown) pass = false;
    if (q1.value != q4.value || q1.term_count != q4.term_count ||
        *q1.breakdown != *q4.breakdown)
      pass = false;
    auto h1 = rank_mine(*cv, 60, nullptr, 0, 64, 1);
    auto h4 = rank_mine(*cv, 60, nullptr, 0, 64, 4);
    if (h1.entries.size() != h4.entries.size()) pass = false;
    for (std::size_t i = 0; pass && i < h1.entries.size(); ++i)
      if (h1.entries[i].D != h4.entries[i].D || h1.entries[i].count != h4.entries[i].count ||
          !(h1.entries[i].witnesses == h4.entries[i].witnesses))
        pass = false;
  }
  if (!pass) detail = "thread-count dependence";

  auto model = default_annulus_model(cube2(), 2024);
  auto a = random_annulus_count(cube2(), model, 24, 1.1, std::nullopt, 1);
  auto b = random_annulus_count(cube2(), model, 24, 1.1, std::nullopt, 4);
  auto c = random_annulus_count(cube2(), model, 24, 1.1);
  if (!(a == b && a == c)) {
    pass = false;
    detail += " seeded model not reproducible";
  }

  if (sum_4nu(10) != 61) {
    pass = false;
    detail += " sum 4^nu(10) != 61";
  }
  report(10, "determinism: bit-stable reports, seeded model, sum 4^nu", pass, t.seconds(),
         detail);
}

}  // namespace

int main() {
  Timer total;
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d/10 criteria passed (%.2fs total)\n", 10 - failures, total.seconds());
  return failures;
}
