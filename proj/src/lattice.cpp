#include "twistrank/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "twistrank/parallel.hpp"
#include "twistrank/psi.hpp"

namespace twistrank {

using arith::to_mpz;

namespace {

using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

constexpr long long kMaxD = 1'000'000'000LL;  // keeps all lattice arithmetic inside int64/int128

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

u64 ll_mod(long long x, u64 m) {
  long long r = x % static_cast<long long>(m);
  if (r < 0) r += static_cast<long long>(m);
  return static_cast<u64>(r);
}

// f(x) mod m for the curve's cubic
u64 f_mod(const Curve& cv, u64 x, u64 m) {
  if (m == 1) return 0;
  u64 r = mulmod(x, x, m);
  r = mulmod(r, x, m);
  r = (r + mulmod(ll_mod(cv.a(), m), mulmod(x, x, m), m)) % m;
  r = (r + mulmod(ll_mod(cv.b(), m), x, m)) % m;
  r = (r + ll_mod(cv.c(), m)) % m;
  return r;
}

// f'(x) mod m
u64 fprime_mod(const Curve& cv, u64 x, u64 m) {
  if (m == 1) return 0;
  u64 r = mulmod(3 % m, mulmod(x, x, m), m);
  r = (r + mulmod(ll_mod(2 * cv.a(), m), x, m)) % m;
  r = (r + ll_mod(cv.b(), m)) % m;
  return r;
}

long long egcd(long long a, long long b, long long& x, long long& y) {
  if (b == 0) { x = 1; y = 0; return a; }
  long long x1, y1;
  long long g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

u64 inv_mod(u64 a, u64 m) {
  long long x, y;
  long long g = egcd(static_cast<long long>(a % m), static_cast<long long>(m), x, y);
  if (g != 1 && g != -1) throw std::logic_error("inv_mod: not invertible");
  long long r = x % static_cast<long long>(m);
  if (r < 0) r += static_cast<long long>(m);
  return static_cast<u64>(r);
}

// roots of f mod p^(2e), by lifting the roots mod p one power at a time
std::vector<u64> roots_mod_prime_power(const Curve& cv, u64 p, unsigned two_e) {
  std::vector<u64> roots;
  for (u64 x = 0; x < p; ++x)
    if (f_mod(cv, x, p) == 0) roots.push_back(x);

  u64 mod = p;
  for (unsigned i = 1; i < two_e; ++i) {
    u64 next_mod = mod * p;
    std::vector<u64> lifted;
    for (u64 r : roots) {
      u64 fp = fprime_mod(cv, r % p, p);
      if (fp != 0) {
        // unique lift: r' = r - f(r) * f'(r)^-1, taken mod p on the cofactor
        u64 fr = f_mod(cv, r, next_mod);
        u64 q = (fr / mod) % p;  // f(r) is divisible by mod here
        u64 t = mulmod((p - q) % p, inv_mod(fp, p), p);
        lifted.push_back(r + t * mod);
      } else {
        // singular root: exhaustive p-way branch
        for (u64 t = 0; t < p; ++t) {
          u64 cand = r + t * mod;
          if (f_mod(cv, cand, next_mod) == 0) lifted.push_back(cand);
        }
      }
    }
    roots = std::move(lifted);
    mod = next_mod;
    if (roots.empty()) break;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

i128 dot(const Vec2& x, const Vec2& y) {
  return (i128)x.u * y.u + (i128)x.v * y.v;
}
i128 norm2(const Vec2& x) { return dot(x, x); }
i128 cross(const Vec2& x, const Vec2& y) { return (i128)x.u * y.v - (i128)x.v * y.u; }

// nearest integer to a/b (b > 0); ties round away from zero
i128 round_div(i128 a, i128 b) {
  i128 q = a / b, r = a % b;
  if (2 * (r < 0 ? -r : r) >= b) q += (a < 0) ? -1 : 1;
  return q;
}

unsigned long long to_u64_norm(i128 n) {
  if (n > (i128)std::numeric_limits<unsigned long long>::max())
    throw std::overflow_error("lattice norm exceeds 64 bits; triple too large");
  return static_cast<unsigned long long>(n);
}

// tie rule: prefer v > 0, then smaller u; if every candidate has v = 0,
// prefer u > 0
bool tie_better(const Vec2& x, const Vec2& y) {
  if ((x.v > 0) != (y.v > 0)) return x.v > 0;
  if (x.v > 0) return x.u < y.u;
  if ((x.v == 0) != (y.v == 0)) return x.v == 0 ? x.u > 0 : false;
  if (x.v == 0) return x.u > y.u;
  return false;  // both v < 0: mirrored copies, order immaterial
}

struct UnitAgg {
  double sum = 0.0;
  double abs = 0.0;
  std::uint64_t count = 0;
  std::uint64_t excluded = 0;
  std::uint64_t ties = 0;
  std::map<std::string, double> breakdown;
};

void validate_qish(double j, double k, long long B) {
  if (!(j >= 0.0)) throw std::domain_error("params: j must be >= 0");
  if (!(k > 0.5)) throw std::domain_error("params: k must exceed 1/2");
  if (B < 1) throw std::domain_error("params: B must be >= 1");
}

std::vector<RootSet> all_root_sets(const Curve& curve, long long dmax, unsigned threads) {
  auto sets = par::indexed_map<RootSet>(
      static_cast<std::size_t>(dmax), threads,
      [&](std::size_t i) { return omega_d(curve, static_cast<long long>(i) + 1); });
  return sets;
}

std::vector<std::pair<long long, long long>> coprime_splits(long long B) {
  std::vector<std::pair<long long, long long>> units;
  for (long long d = 1; d <= B; ++d)
    for (long long dp = 1; d * dp <= B; ++dp)
      if (std::gcd(d, dp) == 1) units.push_back({d, dp});
  return units;
}

}  // namespace

RootSet omega_d(const Curve& curve, long long d) {
  if (d < 1) throw std::domain_error("omega_d: d must be positive");
  if (d > kMaxD) throw std::domain_error("omega_d: d too large for 64-bit residues");
  RootSet out;
  out.d = d;
  if (d == 1) {
    out.residues = {0};
    return out;
  }
  auto fac = arith::factorize(to_mpz(d));
  // residues mod p^2e per prime power, then CRT
  u64 mod_acc = 1;
  std::vector<u64> acc = {0};
  for (const auto& pp : fac.factors) {
    u64 p = mpz_get_ui(pp.p.get_mpz_t());
    u64 pe2 = 1;
    for (unsigned i = 0; i < 2 * pp.e; ++i) pe2 *= p;
    std::vector<u64> local = roots_mod_prime_power(curve, p, 2 * pp.e);
    std::vector<u64> merged;
    merged.reserve(acc.size() * local.size());
    u64 inv = inv_mod(mod_acc % pe2, pe2);
    for (u64 r1 : acc) {
      for (u64 r2 : local) {
        // x = r1 + mod_acc * ((r2 - r1) * inv mod pe2)
        u64 diff = (r2 + pe2 - r1 % pe2) % pe2;
        u64 k = mulmod(diff, inv, pe2);
        merged.push_back(r1 + mod_acc * k);
      }
    }
    acc = std::move(merged);
    mod_acc *= pe2;
  }
  std::sort(acc.begin(), acc.end());
  out.residues.assign(acc.begin(), acc.end());
  return out;
}

const char* membership_name(Membership m) {
  return m == Membership::strict_psi ? "strict_psi" : "F_nonzero";
}

ReducedLattice shortest_vectors(const Curve& curve, const TwistTriple& triple) {
  long long d = triple.d, dp = triple.d_prime, alpha = triple.alpha;
  if (d < 1 || dp < 1) throw std::domain_error("triple: d, d' must be positive");
  if (d > kMaxD || dp > kMaxD || d * dp > kMaxD)
    throw std::domain_error("triple: dd' too large for 64-bit lattice arithmetic");
  if (std::gcd(d, dp) != 1) throw std::domain_error("triple: gcd(d, d') must be 1");
  long long d2 = d * d;
  if (alpha < 0 || alpha >= d2) throw std::domain_error("triple: alpha must lie in [0, d^2)");
  if (f_mod(curve, static_cast<u64>(alpha), static_cast<u64>(d2)) != 0)
    throw std::domain_error("triple: alpha not a root of f mod d^2");

  long long dp2 = dp * dp;
  Vec2 b0{d2, 0};
  Vec2 b1{alpha * dp2, dp2};

  // Lagrange-Gauss: after the loop b0 realizes the first minimum and b1 the
  // second
  for (;;) {
    if (norm2(b0) > norm2(b1)) std::swap(b0, b1);
    i128 mu = round_div(dot(b0, b1), norm2(b0));
    if (mu == 0) break;
    Vec2 nb1{static_cast<long long>((i128)b1.u - mu * b0.u),
             static_cast<long long>((i128)b1.v - mu * b0.v)};
    if (norm2(nb1) >= norm2(b1)) break;
    b1 = nb1;
  }
  if (norm2(b0) > norm2(b1)) std::swap(b0, b1);

  // enumerate small combinations; every vector of norm <= the second
  // minimum lies in this coefficient box for a reduced basis
  std::vector<Vec2> cands;
  for (int m = -2; m <= 2; ++m)
    for (int n = -2; n <= 2; ++n) {
      if (m == 0 && n == 0) continue;
      cands.push_back(Vec2{m * b0.u + n * b1.u, m * b0.v + n * b1.v});
    }
  i128 lam1 = norm2(cands[0]);
  for (const auto& w : cands) lam1 = std::min(lam1, norm2(w));

  ReducedLattice out;
  out.triple = triple;
  out.basis0 = b0;
  out.basis1 = b1;

  bool have_omega = false;
  int half_count = 0;
  bool any_psi = false, all_psi = true, any_f = false, all_f = true;
  for (const auto& w : cands) {
    if (norm2(w) != lam1) continue;
    bool primitive = std::gcd(std::abs(w.u), std::abs(w.v)) == 1;
    bool f_nonzero = curve.F(w.u, w.v) != 0;
    bool in_psi = primitive && f_nonzero;
    if (w.v > 0 || (w.v == 0 && w.u > 0)) {
      ++half_count;  // one representative per +- pair
      any_psi |= in_psi;
      all_psi &= in_psi;
      any_f |= f_nonzero;
      all_f &= f_nonzero;
    }
    if (!have_omega || tie_better(w, out.omega)) {
      out.omega = w;
      have_omega = true;
    }
  }
  out.norm_sq = to_u64_norm(lam1);
  out.min_vector_count = half_count;
  out.psi_tie_ambiguous = any_psi && !all_psi;
  out.f_tie_ambiguous = any_f && !all_f;
  out.F_nonzero = curve.F(out.omega.u, out.omega.v) != 0;
  out.in_psi = out.F_nonzero &&
               std::gcd(std::abs(out.omega.u), std::abs(out.omega.v)) == 1;

  // second minimum: smallest norm among candidates independent of omega
  i128 lam2 = -1;
  for (const auto& w : cands) {
    if (cross(out.omega, w) == 0) continue;
    if (lam2 < 0 || norm2(w) < lam2) lam2 = norm2(w);
  }
  bool have_prime = false;
  for (const auto& w : cands) {
    if (cross(out.omega, w) == 0 || norm2(w) != lam2) continue;
    if (!have_prime || tie_better(w, out.omega_prime)) {
      out.omega_prime = w;
      have_prime = true;
    }
  }
  out.norm_sq_prime = to_u64_norm(lam2);
  return out;
}

TwistTriple decompose_pair(const Curve& curve, long long u, long long v, long long t) {
  if (t < 1) throw std::domain_error("decompose_pair: t must be positive");
  if (t > kMaxD) throw std::domain_error("decompose_pair: t too large");
  if (v == 0 || std::gcd(u, v) != 1)
    throw std::domain_error("decompose_pair: (u,v) not in Psi (must be reduced, v nonzero)");
  mpz_class F = curve.F(u, v);
  if (F == 0) throw std::domain_error("decompose_pair: (u,v) not in Psi (F = 0)");
  mpz_class t2 = to_mpz(t) * to_mpz(t);
  if (!mpz_divisible_p(F.get_mpz_t(), t2.get_mpz_t()))
    throw std::domain_error("decompose_pair: t^2 does not divide F(u,v)");

  mpz_class g = F / to_mpz(v);  // u^3 + a u^2 v + b u v^2 + c v^3
  mpz_class d2g, dp2g;
  mpz_gcd(d2g.get_mpz_t(), t2.get_mpz_t(), g.get_mpz_t());
  mpz_class vz = to_mpz(v);
  mpz_gcd(dp2g.get_mpz_t(), t2.get_mpz_t(), vz.get_mpz_t());
  mpz_class d_z, dp_z;
  mpz_sqrt(d_z.get_mpz_t(), d2g.get_mpz_t());
  mpz_sqrt(dp_z.get_mpz_t(), dp2g.get_mpz_t());
  if (d_z * d_z != d2g || dp_z * dp_z != dp2g)
    throw std::logic_error("decompose_pair: gcd cofactors not perfect squares");
  long long d = mpz_get_si(d_z.get_mpz_t());
  long long dp = mpz_get_si(dp_z.get_mpz_t());
  if (d * dp != t) throw std::logic_error("decompose_pair: dd' != t");

  long long alpha = 0;
  if (d > 1) {
    mpz_class mod = to_mpz(d) * to_mpz(d);
    mpz_class vinv;
    if (mpz_invert(vinv.get_mpz_t(), vz.get_mpz_t(), mod.get_mpz_t()) == 0)
      throw std::logic_error("decompose_pair: v not invertible mod d^2");
    mpz_class az = (to_mpz(u) * vinv) % mod;
    if (az < 0) az += mod;
    alpha = mpz_get_si(az.get_mpz_t());
  }

  TwistTriple triple{alpha, d, dp};
  // cheap postcondition checks
  if (std::gcd(d, dp) != 1) throw std::logic_error("decompose_pair: gcd(d,d') != 1");
  if (f_mod(curve, static_cast<u64>(alpha), static_cast<u64>(d) * d) != 0)
    throw std::logic_error("decompose_pair: alpha not in Omega_d");
  if (v % (dp * dp) != 0) throw std::logic_error("decompose_pair: d'^2 does not divide v");
  if (((to_mpz(u) - to_mpz(alpha) * to_mpz(v)) % (to_mpz(d) * to_mpz(d))) != 0)
    throw std::logic_error("decompose_pair: u != alpha v mod d^2");
  return triple;
}

double q_term(const Curve& curve, const TwistTriple& triple, double j, double k) {
  ReducedLattice rl = shortest_vectors(curve, triple);
  double t = static_cast<double>(triple.d) * static_cast<double>(triple.d_prime);
  double n2 = static_cast<double>(rl.norm_sq);
  return std::pow(t, 2.0 * k) * std::pow(std::max(1.0, std::log(t)), -j) *
         std::pow(n2, -2.0 * k);
}

SumReport q_partial(const Curve& curve, double j, double k, long long B, Membership membership,
                    unsigned threads, bool with_breakdown) {
  validate_qish(j, k, B);
  unsigned resolved = par::resolve_threads(threads);
  auto omegas = all_root_sets(curve, B, threads);
  auto units = coprime_splits(B);

  auto results = par::indexed_map<UnitAgg>(units.size(), threads, [&](std::size_t i) {
    auto [d, dp] = units[i];
    UnitAgg agg;
    par::KahanSum acc, abs_acc;
    double t = static_cast<double>(d) * static_cast<double>(dp);
    for (long long alpha : omegas[static_cast<std::size_t>(d - 1)].residues) {
      ReducedLattice rl = shortest_vectors(curve, TwistTriple{alpha, d, dp});
      bool pass = membership == Membership::strict_psi ? rl.in_psi : rl.F_nonzero;
      bool ambiguous =
          membership == Membership::strict_psi ? rl.psi_tie_ambiguous : rl.f_tie_ambiguous;
      if (ambiguous) agg.ties += 1;
      if (!pass) {
        agg.excluded += 1;
        continue;
      }
      double term = std::pow(t, 2.0 * k) * std::pow(std::max(1.0, std::log(t)), -j) *
                    std::pow(static_cast<double>(rl.norm_sq), -2.0 * k);
      acc.add(term);
      abs_acc.add(term);
      agg.count += 1;
      if (with_breakdown) agg.breakdown[std::to_string(d * dp)] += term;
    }
    agg.sum = acc.value();
    agg.abs = abs_acc.value();
    return agg;
  });

  par::KahanSum total, abs_total;
  SumReport rep;
  std::map<std::string, double> breakdown;
  for (const auto& r : results) {
    total.add(r.sum);
    abs_total.add(r.abs);
    rep.term_count += r.count;
    rep.excluded_count += r.excluded;
    rep.tie_ambiguous_count += r.ties;
    for (const auto& [key, val] : r.breakdown) breakdown[key] += val;
  }
  rep.series = "Q";
  rep.curve_a = curve.a();
  rep.curve_b = curve.b();
  rep.curve_c = curve.c();
  rep.j = j;
  rep.k = k;
  rep.B = B;
  rep.membership = membership_name(membership);
  rep.value = total.value();
  rep.abs_sum = abs_total.value();
  rep.kahan_error_bound =
      static_cast<double>(rep.term_count) * std::numeric_limits<double>::epsilon() * rep.abs_sum;
  rep.threads = resolved;
  if (with_breakdown) rep.breakdown = std::move(breakdown);
  return rep;
}

SumReport r_via_lattices(const Curve& curve, const SumParams& params, unsigned threads,
                         bool with_breakdown) {
  params.validate();
  const WindowX* win = params.window ? &*params.window : nullptr;
  unsigned resolved = par::resolve_threads(threads);
  const long long N = params.N;

  // box prepass: the largest |F| bounds the t range (t^2 | F forces t <= sqrt|F|)
  auto stripe_max = par::indexed_map<mpz_class>(
      static_cast<std::size_t>(N), threads, [&](std::size_t idx) {
        long long v = static_cast<long long>(idx) + 1;
        mpz_class best = 0;
        detail::visit_stripe(curve, N, v, nullptr,
                             [&](long long, long long, const mpz_class& F) {
                               mpz_class a = abs(F);
                               if (a > best) best = a;
                             });
        return best;
      });
  mpz_class max_f = 0;
  for (const auto& m : stripe_max) max_f = std::max(max_f, m);
  mpz_class tmax_z;
  mpz_sqrt(tmax_z.get_mpz_t(), max_f.get_mpz_t());
  long long t_max = mpz_get_si(tmax_z.get_mpz_t());

  std::vector<RootSet> omegas;
  if (t_max >= 1) omegas = all_root_sets(curve, t_max, threads);

  auto results = par::indexed_map<UnitAgg>(
      static_cast<std::size_t>(std::max<long long>(t_max, 0)), threads, [&](std::size_t idx) {
        long long t = static_cast<long long>(idx) + 1;
        UnitAgg agg;
        par::KahanSum acc, abs_acc;
        std::vector<std::pair<long long, long long>> splits;
        for (long long d = 1; d * d <= t; ++d) {
          if (t % d != 0) continue;
          splits.push_back({d, t / d});
          if (d != t / d) splits.push_back({t / d, d});
        }
        std::sort(splits.begin(), splits.end());
        for (auto [d, dp] : splits) {
          if (std::gcd(d, dp) != 1) continue;
          long long dp2 = dp * dp;
          if (dp2 > N) continue;
          long long d2 = d * d;
          for (long long alpha : omegas[static_cast<std::size_t>(d - 1)].residues) {
            for (long long v = dp2; v <= N; v += dp2) {
              // u must track alpha*v mod d^2 inside [-N, N]
              long long u0 = static_cast<long long>(
                  mulmod(static_cast<u64>(alpha), static_cast<u64>(v), static_cast<u64>(d2)));
              long long u_start = u0 - d2 * ((u0 + N) / d2);
              for (long long u = u_start; u <= N; u += d2) {
                if (std::gcd(std::abs(u), v) != 1) continue;
                if (win && !win->contains(u, v)) continue;
                mpz_class F = curve.F(u, v);
                if (F == 0) continue;
                double h = naive_height(u, v);
                double term = std::pow(static_cast<double>(t), 2.0 * params.k) *
                              std::pow(std::abs(mpz_get_d(F.get_mpz_t())), -params.k) *
                              std::pow(h, -params.j);
                acc.add(term);
                abs_acc.add(term);
                agg.count += 1;
              }
            }
          }
        }
        agg.sum = acc.value();
        agg.abs = abs_acc.value();
        if (with_breakdown && agg.count > 0)
          agg.breakdown[std::to_string(t)] = 2.0 * agg.sum;
        return agg;
      });

  par::KahanSum total, abs_total;
  SumReport rep;
  std::map<std::string, double> breakdown;
  for (const auto& r : results) {
    total.add(r.sum);
    abs_total.add(r.abs);
    rep.term_count += r.count;
    for (const auto& [key, val] : r.breakdown) breakdown[key] += val;
  }
  rep.series = "R_lattice";
  rep.curve_a = curve.a();
  rep.curve_b = curve.b();
  rep.curve_c = curve.c();
  rep.j = params.j;
  rep.k = params.k;
  rep.N = N;
  if (params.window) rep.window_str = params.window->str();
  rep.value = 2.0 * total.value();
  rep.term_count *= 2;
  rep.abs_sum = 2.0 * abs_total.value();
  rep.kahan_error_bound =
      static_cast<double>(rep.term_count) * std::numeric_limits<double>::epsilon() * rep.abs_sum;
  rep.threads = resolved;
  if (with_breakdown) rep.breakdown = std::move(breakdown);
  return rep;
}

AnnulusFit fit_annulus_constants(const Curve& curve, long long B, unsigned threads) {
  if (B < 1) throw std::domain_error("fit_annulus_constants: B must be >= 1");
  auto omegas = all_root_sets(curve, B, threads);
  auto units = coprime_splits(B);

  struct Extremes {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    std::uint64_t n = 0;
  };
  auto results = par::indexed_map<Extremes>(units.size(), threads, [&](std::size_t i) {
    auto [d, dp] = units[i];
    Extremes ex;
    double t = static_cast<double>(d) * static_cast<double>(dp);
    for (long long alpha : omegas[static_cast<std::size_t>(d - 1)].residues) {
      ReducedLattice rl = shortest_vectors(curve, TwistTriple{alpha, d, dp});
      if (!rl.F_nonzero) continue;
      double norm = std::sqrt(static_cast<double>(rl.norm_sq));
      ex.lo = std::min(ex.lo, norm / std::sqrt(t));
      ex.hi = std::max(ex.hi, norm / t);
      ex.n += 1;
    }
    return ex;
  });

  AnnulusFit fit;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& ex : results) {
    lo = std::min(lo, ex.lo);
    hi = std::max(hi, ex.hi);
    fit.triples += ex.n;
  }
  if (fit.triples == 0) throw std::domain_error("fit_annulus_constants: no triples with F != 0");
  fit.C1 = lo * (1.0 - 1e-9);
  fit.C2 = hi * (1.0 + 1e-9);
  return fit;
}

}  // namespace twistrank
