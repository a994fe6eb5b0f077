#include "twistrank/verify.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "twistrank/heuristics.hpp"
#include "twistrank/lattice.hpp"
#include "twistrank/parallel.hpp"
#include "twistrank/psi.hpp"
#include "twistrank/report.hpp"
#include "twistrank/series.hpp"

namespace twistrank {

namespace {

using arith::to_mpz;

struct Lcg {
  std::uint64_t st = 0x2545F4914F6CDD1Dull;
  std::uint64_t next() {
    st = st * 6364136223846793005ull + 1442695040888963407ull;
    return st >> 11;
  }
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

class Suite {
 public:
  explicit Suite(std::vector<CheckResult>& out) : out_(out) {}

  // fn returns an empty string on pass, a counterexample otherwise
  void run(const std::string& name, const std::function<std::string()>& fn) {
    CheckResult r;
    r.name = name;
    try {
      r.detail = fn();
      r.pass = r.detail.empty() || r.detail.rfind("skipped", 0) == 0;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out_.push_back(std::move(r));
  }

 private:
  std::vector<CheckResult>& out_;
};

std::string fmt_pair(long long u, long long v) {
  std::ostringstream os;
  os << "(u,v)=(" << u << "," << v << ")";
  return os.str();
}

bool is_congruent_curve(const Curve& cv) {
  return cv.a() == 0 && cv.b() == -1 && cv.c() == 0;
}

bool in_lattice(const TwistTriple& tr, long long u, long long v) {
  long long d2 = tr.d * tr.d, dp2 = tr.d_prime * tr.d_prime;
  if (v % dp2 != 0) return false;
  long long r = (u % d2 - tr.alpha % d2 * (v % d2)) % d2;
  return ((r % d2) + d2) % d2 == 0;
}

}  // namespace

bool all_pass(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::vector<CheckResult> run_all_checks(const Curve& curve, const VerifyScales& sc) {
  std::vector<CheckResult> out;
  Suite suite(out);
  const unsigned threads = sc.threads;

  // ---- arith ----
  suite.run("arith.squarefree_multiplicative", [&] {
    Lcg rng;
    int done = 0;
    while (done < 150) {
      long long a = rng.range(2, 1'000'000), b = rng.range(2, 1'000'000);
      if (std::gcd(a, b) != 1) continue;
      ++done;
      if (arith::squarefree_part(to_mpz(a) * to_mpz(b)).s !=
          arith::squarefree_part(to_mpz(a)).s * arith::squarefree_part(to_mpz(b)).s) {
        std::ostringstream os;
        os << "a=" << a << " b=" << b;
        return os.str();
      }
    }
    return std::string();
  });

  suite.run("arith.squarefree_square_invariance", [&] {
    Lcg rng;
    for (int i = 0; i < 150; ++i) {
      long long n = rng.range(-200000, 200000), k = rng.range(1, 400);
      if (n == 0) continue;
      if (arith::squarefree_part(to_mpz(n) * to_mpz(k) * to_mpz(k)).s !=
          arith::squarefree_part(to_mpz(n)).s) {
        std::ostringstream os;
        os << "n=" << n << " k=" << k;
        return os.str();
      }
    }
    return std::string();
  });

  suite.run("arith.nu_log2_bound", [&] {
    Lcg rng;
    for (int i = 0; i < 150; ++i) {
      long long d = rng.range(2, 3'000'000);
      if (arith::factorize(to_mpz(d)).nu() > std::log2(static_cast<double>(d)) + 1e-9) {
        std::ostringstream os;
        os << "d=" << d;
        return os.str();
      }
    }
    return std::string();
  });

  suite.run("arith.zeta_bracketing", [&] {
    const double z2 = 3.14159265358979323846 * 3.14159265358979323846 / 6.0;
    for (std::uint64_t M : {20ull, 200ull, 2000ull, 20000ull}) {
      auto b = arith::zeta_bracket(2.0, M);
      if (!(b.partial <= z2 && z2 <= b.partial + b.tail)) {
        std::ostringstream os;
        os << "M=" << M;
        return os.str();
      }
    }
    return std::string();
  });

  // ---- curve ----
  suite.run("curve.F_matches_rational_f", [&] {
    for (long long u = -10; u <= 10; ++u)
      for (long long v = 1; v <= 10; ++v) {
        mpq_class x(to_mpz(u), to_mpz(v));
        mpq_canonicalize(x.get_mpq_t());
        mpq_class v4 = mpq_class(to_mpz(v)) * to_mpz(v) * to_mpz(v) * to_mpz(v);
        if (mpq_class(curve.F(to_mpz(u), to_mpz(v))) != v4 * curve.f_at(x)) return fmt_pair(u, v);
      }
    return std::string();
  });

  suite.run("curve.F_even_homogeneity", [&] {
    for (long long u = -10; u <= 10; ++u)
      for (long long v = -10; v <= 10; ++v)
        if (curve.F(-u, -v) != curve.F(u, v)) return fmt_pair(u, v);
    return std::string();
  });

  suite.run("curve.sF_equals_sf", [&] {
    for (long long u = -10; u <= 10; ++u)
      for (long long v = 1; v <= 10; ++v) {
        if (std::gcd(u, v) != 1) continue;
        mpz_class F = curve.F(u, v);
        if (F == 0) continue;
        mpq_class x(to_mpz(u), to_mpz(v));
        mpq_canonicalize(x.get_mpq_t());
        mpq_class fx = curve.f_at(x);
        if (arith::squarefree_part(fx.get_num() * fx.get_den()).s != arith::squarefree_part(F).s)
          return fmt_pair(u, v);
      }
    return std::string();
  });

  suite.run("curve.default_window_broad", [&] {
    WindowX w = default_broad_window(curve);
    if (!w.is_broad(curve)) return std::string("window not broad");
    for (const auto& iv : w.intervals())
      for (double root : curve.real_roots())
        if (std::abs(iv.lo.get_d() - root) < 0.5 || std::abs(iv.hi.get_d() - root) < 0.5)
          return std::string("interval endpoint too close to a root");
    return std::string();
  });

  // ---- psi ----
  suite.run("psi.enumeration_canonical", [&] {
    auto pairs = enumerate_psi(curve, sc.psi_box);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& p = pairs[i];
      if (p.v < 1 || std::gcd(p.u, p.v) != 1 || p.F == 0 || p.F != curve.F(p.u, p.v))
        return fmt_pair(p.u, p.v);
      if (i > 0 && !(pairs[i - 1].v < p.v || (pairs[i - 1].v == p.v && pairs[i - 1].u < p.u)))
        return std::string("order violation at index ") + std::to_string(i);
    }
    return std::string();
  });

  suite.run("psi.lift_point_equation", [&] {
    for (const auto& p : enumerate_psi(curve, std::min<long long>(sc.psi_box, 25))) {
      TwistPoint pt = lift_point(curve, p.u, p.v);
      if (mpq_class(pt.D) * pt.y * pt.y != curve.f_at(pt.x) || pt.y < 0) return fmt_pair(p.u, p.v);
    }
    return std::string();
  });

  suite.run("psi.histogram_complete", [&] {
    auto hist = rank_mine(curve, sc.psi_box, nullptr, 0, 8, threads);
    std::uint64_t sum = 0;
    for (const auto& e : hist.entries) {
      sum += e.count;
      for (const auto& w : e.witnesses)
        if (arith::squarefree_part(w.F).s != e.D) return std::string("witness class mismatch");
    }
    if (sum != hist.total_pairs) return std::string("counts do not add up");
    if (hist.total_pairs != enumerate_psi(curve, sc.psi_box).size())
      return std::string("total differs from enumeration");
    return std::string();
  });

  suite.run("psi.example2_multiplicativity", [&] {
    if (!is_congruent_curve(curve)) return std::string("skipped (only for x^3 - x)");
    for (const auto& p : enumerate_psi(curve, sc.psi_box)) {
      mpz_class product = arith::squarefree_part(to_mpz(p.u)).s *
                          arith::squarefree_part(to_mpz(p.v)).s *
                          arith::squarefree_part(to_mpz(p.u + p.v)).s *
                          arith::squarefree_part(to_mpz(p.u - p.v)).s;
      if (arith::squarefree_part(product).s != arith::squarefree_part(p.F).s)
        return fmt_pair(p.u, p.v);
    }
    return std::string();
  });

  suite.run("psi.odd_antisymmetry", [&] {
    if (!is_congruent_curve(curve)) return std::string("skipped (only for x^3 - x)");
    for (long long u = -8; u <= 8; ++u)
      for (long long v = -8; v <= 8; ++v)
        if (curve.F(-u, v) != -curve.F(u, v)) return fmt_pair(u, v);
    return std::string();
  });

  // ---- series ----
  suite.run("series.per_term_divisor_identity", [&] {
    for (double k : {1.0, 1.5}) {
      for (const auto& p : enumerate_psi(curve, std::min<long long>(sc.series_box, 30))) {
        mpz_class a = abs(p.F);
        double direct = 0.0;
        for (mpz_class t = 1; t * t <= a; ++t)
          if (mpz_divisible_p(a.get_mpz_t(), mpz_class(t * t).get_mpz_t()))
            direct += std::pow(t.get_d(), 2.0 * k) * std::pow(a.get_d(), -k);
        auto fac = arith::factorize(p.F);
        double fused = std::pow(std::abs(arith::squarefree_from(fac).s.get_d()), -k) *
                       arith::divisor_power_sum(arith::square_cofactor_factors(fac), 2.0 * k);
        if (std::abs(direct - fused) > 1e-12 * std::max(1.0, std::abs(direct)))
          return fmt_pair(p.u, p.v);
      }
    }
    return std::string();
  });

  suite.run("series.prop10_sandwich", [&] {
    for (double j : {0.0, 1.0, 2.0}) {
      for (double k : {0.6, 1.0, 1.5}) {
        SumParams p{j, k, sc.series_box, std::nullopt};
        double S = s_partial(curve, p, threads).value;
        double R = r_partial(curve, p, threads).value;
        double z = arith::zeta_even(2.0 * k, 1e-6);
        if (!(S <= R && R <= z * S * (1 + 1e-12) + 1e-300)) {
          std::ostringstream os;
          os << "j=" << j << " k=" << k;
          return os.str();
        }
      }
    }
    return std::string();
  });

  suite.run("series.monotone_in_N", [&] {
    double prev_s = -1.0, prev_r = -1.0;
    for (long long N = 4; N <= sc.series_box; N *= 2) {
      SumParams p{1.0, 1.0, N, std::nullopt};
      double S = s_partial(curve, p, threads).value;
      double R = r_partial(curve, p, threads).value;
      if (S < prev_s || R < prev_r) return std::string("N=") + std::to_string(N);
      prev_s = S;
      prev_r = R;
    }
    return std::string();
  });

  suite.run("series.window_restriction", [&] {
    SumParams all{1.0, 1.0, sc.series_box, std::nullopt};
    for (const char* spec : {"0..inf", "-2..2"}) {
      SumParams win{1.0, 1.0, sc.series_box, WindowX::parse(spec)};
      if (s_partial(curve, win, threads).value > s_partial(curve, all, threads).value)
        return std::string(spec);
    }
    SumParams broad{1.0, 1.0, sc.series_box, default_broad_window(curve)};
    if (s_partial(curve, broad, threads).value > s_partial(curve, all, threads).value)
      return std::string("default broad window");
    return std::string();
  });

  suite.run("series.k_monotone_when_s_min_ge_2", [&] {
    mpz_class min_s(-1);
    for (const auto& p : enumerate_psi(curve, sc.series_box)) {
      mpz_class s = abs(arith::squarefree_part(p.F).s);
      if (min_s < 0 || s < min_s) min_s = s;
    }
    if (min_s < 2) return std::string("skipped (min |s| < 2 over the box)");
    double prev = std::numeric_limits<double>::infinity();
    for (double k : {0.75, 1.0, 1.5, 2.0}) {
      SumParams p{1.0, k, sc.series_box, std::nullopt};
      double S = s_partial(curve, p, threads).value;
      if (S > prev) return std::string("k=") + std::to_string(k);
      prev = S;
    }
    return std::string();
  });

  // ---- lattice ----
  suite.run("lattice.omega_exhaustive", [&] {
    for (long long d = 1; d <= sc.omega_dmax; ++d) {
      auto fast = omega_d(curve, d);
      std::vector<long long> slow;
      mpz_class d2 = to_mpz(d) * to_mpz(d);
      for (long long a = 0; a < d * d; ++a) {
        mpq_class fa = curve.f_at(mpq_class(to_mpz(a)));
        if (mpz_divisible_p(mpz_class(fa.get_num()).get_mpz_t(), d2.get_mpz_t()))
          slow.push_back(a);
      }
      if (fast.residues != slow) return std::string("d=") + std::to_string(d);
    }
    return std::string();
  });

  suite.run("lattice.omega_multiplicative", [&] {
    for (auto [d1, d2] : std::vector<std::pair<long long, long long>>{
             {2, 3}, {3, 4}, {4, 5}, {5, 6}, {7, 9}, {8, 9}}) {
      auto wa = omega_d(curve, d1), wb = omega_d(curve, d2), wab = omega_d(curve, d1 * d2);
      if (wab.residues.size() != wa.residues.size() * wb.residues.size())
        return std::string("d1=") + std::to_string(d1) + " d2=" + std::to_string(d2);
      std::set<long long> sa(wa.residues.begin(), wa.residues.end());
      std::set<long long> sb(wb.residues.begin(), wb.residues.end());
      for (long long r : wab.residues)
        if (!sa.count(r % (d1 * d1)) || !sb.count(r % (d2 * d2)))
          return std::string("CRT mismatch d1d2=") + std::to_string(d1 * d2);
    }
    return std::string();
  });

  suite.run("lattice.omega_simple_root_bound", [&] {
    mpz_class bad = 2 * curve.discriminant();
    for (long long p : {3LL, 5LL, 7LL, 11LL, 13LL}) {
      if (mpz_divisible_ui_p(bad.get_mpz_t(), static_cast<unsigned long>(p))) continue;
      if (omega_d(curve, p).residues.size() > 3 ||
          omega_d(curve, p * p).residues.size() != omega_d(curve, p).residues.size())
        return std::string("p=") + std::to_string(p);
    }
    return std::string();
  });

  suite.run("lattice.reduction_brute_force", [&] {
    for (long long d = 1; d <= sc.lattice_B; ++d)
      for (long long dp = 1; d * dp <= sc.lattice_B; ++dp) {
        if (std::gcd(d, dp) != 1) continue;
        for (long long alpha : omega_d(curve, d).residues) {
          TwistTriple tr{alpha, d, dp};
          auto rl = shortest_vectors(curve, tr);
          long long R = 2 * d * dp;
          unsigned long long best = ~0ull;
          for (long long u = -R; u <= R; ++u)
            for (long long v = -R; v <= R; ++v) {
              if ((u || v) && in_lattice(tr, u, v))
                best = std::min(best, static_cast<unsigned long long>(u * u + v * v));
            }
          if (rl.norm_sq != best) {
            std::ostringstream os;
            os << "(alpha,d,d')=(" << alpha << "," << d << "," << dp << ")";
            return os.str();
          }
        }
      }
    return std::string();
  });

  suite.run("lattice.hermite_and_second_minimum", [&] {
    const double hermite = 2.0 / std::sqrt(3.0);
    for (long long d = 1; d <= sc.lattice_B; ++d)
      for (long long dp = 1; d * dp <= sc.lattice_B; ++dp) {
        if (std::gcd(d, dp) != 1) continue;
        for (long long alpha : omega_d(curve, d).residues) {
          auto rl = shortest_vectors(curve, {alpha, d, dp});
          double t = static_cast<double>(d * dp);
          long long det =
              std::abs(rl.basis0.u * rl.basis1.v - rl.basis0.v * rl.basis1.u);
          bool ok = rl.norm_sq <= rl.norm_sq_prime &&
                    static_cast<double>(rl.norm_sq) <= hermite * t * t + 1e-9 &&
                    det == d * d * dp * dp &&
                    std::sqrt(static_cast<double>(rl.norm_sq)) *
                            std::sqrt(static_cast<double>(rl.norm_sq_prime)) >=
                        t * t * (1 - 1e-12);
          for (int m = -5; ok && m <= 5; ++m)
            for (int n = -5; ok && n <= 5; ++n) {
              double lhs = std::pow(static_cast<double>(m * rl.omega.u + n * rl.omega_prime.u), 2) +
                           std::pow(static_cast<double>(m * rl.omega.v + n * rl.omega_prime.v), 2);
              if (lhs < 0.5 * (m * m * static_cast<double>(rl.norm_sq) +
                               n * n * static_cast<double>(rl.norm_sq_prime)) -
                            1e-6)
                ok = false;
            }
          if (!ok) {
            std::ostringstream os;
            os << "(alpha,d,d')=(" << alpha << "," << d << "," << dp << ")";
            return os.str();
          }
        }
      }
    return std::string();
  });

  suite.run("lattice.partition", [&] {
    auto pairs = enumerate_psi(curve, sc.partition_box);
    for (long long t = 1; t <= sc.partition_tmax; ++t) {
      mpz_class t2 = to_mpz(t) * to_mpz(t);
      std::vector<TwistTriple> triples;
      for (long long d = 1; d <= t; ++d) {
        if (t % d != 0 || std::gcd(d, t / d) != 1) continue;
        for (long long alpha : omega_d(curve, d).residues) triples.push_back({alpha, d, t / d});
      }
      std::set<std::pair<long long, long long>> covered;
      for (const auto& tr : triples)
        for (const auto& p : pairs) {
          if (!in_lattice(tr, p.u, p.v)) continue;
          if (!covered.insert({p.u, p.v}).second)
            return std::string("overlap at t=") + std::to_string(t) + " " + fmt_pair(p.u, p.v);
          if (!mpz_divisible_p(p.F.get_mpz_t(), t2.get_mpz_t()))
            return std::string("t^2 does not divide F, t=") + std::to_string(t);
          if (!(decompose_pair(curve, p.u, p.v, t) == tr))
            return std::string("decompose mismatch at t=") + std::to_string(t);
        }
      for (const auto& p : pairs)
        if (mpz_divisible_p(p.F.get_mpz_t(), t2.get_mpz_t()) && !covered.count({p.u, p.v}))
          return std::string("uncovered pair at t=") + std::to_string(t) + " " + fmt_pair(p.u, p.v);
    }
    return std::string();
  });

  suite.run("lattice.r_regrouping", [&] {
    SumParams p{1.0, 1.0, std::min<long long>(sc.series_box, 25), std::nullopt};
    double direct = r_partial(curve, p, threads).value;
    double grouped = r_via_lattices(curve, p, threads).value;
    if (std::abs(direct - grouped) > 1e-12 * std::max(1.0, std::abs(direct))) {
      std::ostringstream os;
      os.precision(17);
      os << "direct=" << direct << " grouped=" << grouped;
      return os.str();
    }
    return std::string();
  });

  suite.run("lattice.annulus_containment", [&] {
    AnnulusModel frozen = default_annulus_model(curve, 0);
    // raw fitted constants for the containment check (the model clamps C1)
    auto fit = fit_annulus_constants(curve, sc.annulus_B);
    for (long long d = 1; d <= sc.annulus_B; ++d)
      for (long long dp = 1; d * dp <= sc.annulus_B; ++dp) {
        if (std::gcd(d, dp) != 1) continue;
        for (long long alpha : omega_d(curve, d).residues) {
          auto rl = shortest_vectors(curve, {alpha, d, dp});
          if (!rl.F_nonzero) continue;
          double t = static_cast<double>(d * dp);
          double norm = std::sqrt(static_cast<double>(rl.norm_sq));
          if (norm < fit.C1 * std::sqrt(t) || norm > fit.C2 * t) {
            std::ostringstream os;
            os << "(alpha,d,d')=(" << alpha << "," << d << "," << dp << ")";
            return os.str();
          }
        }
      }
    (void)frozen;
    return std::string();
  });

  suite.run("lattice.q_monotone_in_B", [&] {
    double prev = -1.0;
    for (long long B = 1; B <= sc.lattice_B; ++B) {
      double q = q_partial(curve, 1.0, 1.0, B, Membership::strict_psi, threads).value;
      if (q < prev) return std::string("B=") + std::to_string(B);
      prev = q;
    }
    return std::string();
  });

  // ---- heuristics ----
  suite.run("heuristics.rng_determinism", [&] {
    auto model = default_annulus_model(curve, 99);
    auto a = random_annulus_count(curve, model, 16, 1.0, std::nullopt, 1);
    auto b = random_annulus_count(curve, model, 16, 1.0, std::nullopt, 4);
    auto c = random_annulus_count(curve, model, 16, 1.0);
    if (!(a == b && a == c)) return std::string("counts differ across runs/threads");
    return std::string();
  });

  suite.run("heuristics.area_uniform_mean", [&] {
    auto model = default_annulus_model(curve, 7);
    const long long t = 5;
    double r1sq = model.C1 * model.C1 * t, r2sq = model.C2 * model.C2 * t * t;
    std::uint64_t key = rng::triple_key(model.seed, 1, 5, 1);
    double sum = 0, sumsq = 0;
    for (int i = 0; i < sc.rng_draws; ++i) {
      double rsq = r1sq + rng::unit_double(key, static_cast<std::uint64_t>(i)) * (r2sq - r1sq);
      sum += rsq;
      sumsq += rsq * rsq;
    }
    double mean = sum / sc.rng_draws;
    double expected = (r1sq + r2sq) / 2.0;
    double se = std::sqrt((sumsq / sc.rng_draws - mean * mean) / sc.rng_draws);
    if (std::abs(mean - expected) > 3.0 * se) {
      std::ostringstream os;
      os << "mean=" << mean << " expected=" << expected << " se=" << se;
      return os.str();
    }
    return std::string();
  });

  suite.run("heuristics.sum_4nu_prefix", [&] {
    if (sum_4nu(1) != 1 || sum_4nu(10) != 61) return std::string("prefix mismatch");
    std::uint64_t direct = 0;
    for (long long t = 1; t <= 300; ++t)
      direct += 1ull << (2 * arith::factorize(to_mpz(t)).nu());
    if (sum_4nu(300) != direct) return std::string("x=300");
    return std::string();
  });

  suite.run("heuristics.eq8_ladder", [&] {
    auto decade = [](double j, long long T) {
      return heuristic_bound_report(j, 1.0, 1.0, 10 * T).series_partial -
             heuristic_bound_report(j, 1.0, 1.0, T).series_partial;
    };
    for (double j : {5.0, 6.0}) {
      double prev = decade(j, 10);
      for (long long T : {100LL, 1000LL}) {
        double cur = decade(j, T);
        if (!(cur < prev)) return std::string("expected shrinking increments at j=5,6");
        prev = cur;
      }
    }
    for (double j : {2.0, 3.0}) {
      double prev = decade(j, 10);
      for (long long T : {100LL, 1000LL}) {
        double cur = decade(j, T);
        if (cur < prev) return std::string("expected non-shrinking increments at j=2,3");
        prev = cur;
      }
    }
    return std::string();
  });

  // ---- reports / determinism ----
  suite.run("report.json_round_trip", [&] {
    SumParams p{1.0, 1.0, std::min<long long>(sc.series_box, 20), WindowX::parse("-9..9")};
    auto rep = s_partial(curve, p, threads, true);
    auto back = report::sum_report_from_json(
        report::json::parse(report::to_json(rep).dump()));
    if (!(back == rep)) return std::string("sum report");
    auto q = q_partial(curve, 1.0, 1.0, 6, Membership::F_nonzero, threads, true);
    if (!(report::sum_report_from_json(report::json::parse(report::to_json(q).dump())) == q))
      return std::string("q report");
    auto ex = observed_short_count(curve, 8, 1.5, Membership::strict_psi, 2.0, threads);
    if (!(report::experiment_from_json(report::json::parse(report::to_json(ex).dump())) == ex))
      return std::string("experiment report");
    auto hb = heuristic_bound_report(4.0, 1.0, 1.0, 500);
    if (!(report::heuristic_report_from_json(
              report::json::parse(report::to_json(hb).dump())) == hb))
      return std::string("heuristic report");
    return std::string();
  });

  suite.run("parallel.bit_stability", [&] {
    SumParams p{1.5, 1.0, sc.series_box, std::nullopt};
    auto s1 = s_partial(curve, p, 1);
    auto s4 = s_partial(curve, p, 4);
    auto r1 = r_partial(curve, p, 1);
    auto r4 = r_partial(curve, p, 4);
    auto q1 = q_partial(curve, 1.0, 1.0, sc.lattice_B, Membership::strict_psi, 1);
    auto q4 = q_partial(curve, 1.0, 1.0, sc.lattice_B, Membership::strict_psi, 4);
    if (s1.value != s4.value || r1.value != r4.value || q1.value != q4.value)
      return std::string("values differ between 1 and 4 threads");
    return std::string();
  });

  return out;
}

}  // namespace twistrank
