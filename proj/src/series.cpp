#include "twistrank/series.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "twistrank/parallel.hpp"
#include "twistrank/psi.hpp"

namespace twistrank {

namespace {

struct StripeAgg {
  double sum = 0.0;
  double abs = 0.0;
  std::uint64_t count = 0;
  std::map<std::string, double> breakdown;
};

// shared stripe driver for the S and R routes; term_fn maps the pair's
// squarefree data to the series term (before the height factor)
template <class TermFn>
SumReport boxed_sum(const Curve& curve, const SumParams& params, unsigned threads,
                    bool with_breakdown, const char* name, TermFn&& term_fn) {
  params.validate();
  const WindowX* win = params.window ? &*params.window : nullptr;
  unsigned resolved = par::resolve_threads(threads);

  auto stripes = par::indexed_map<StripeAgg>(
      static_cast<std::size_t>(params.N), threads, [&](std::size_t idx) {
        long long v = static_cast<long long>(idx) + 1;
        StripeAgg agg;
        par::KahanSum acc, abs_acc;
        detail::visit_stripe(curve, params.N, v, win,
                             [&](long long u, long long vv, const mpz_class& F) {
                               auto fac = arith::factorize(F);
                               auto sf = arith::squarefree_from(fac);
                               double h = naive_height(u, vv);
                               double term = term_fn(fac, sf) * std::pow(h, -params.j);
                               acc.add(term);
                               abs_acc.add(term);
                               agg.count += 1;
                               if (with_breakdown) {
                                 agg.breakdown[sf.s.get_str()] += 2.0 * term;
                               }
                             });
        agg.sum = acc.value();
        agg.abs = abs_acc.value();
        return agg;
      });

  par::KahanSum total, abs_total;
  std::uint64_t count = 0;
  std::map<std::string, double> breakdown;
  for (const auto& st : stripes) {
    total.add(st.sum);
    abs_total.add(st.abs);
    count += st.count;
    for (const auto& [key, val] : st.breakdown) breakdown[key] += val;
  }

  SumReport rep;
  rep.series = name;
  rep.curve_a = curve.a();
  rep.curve_b = curve.b();
  rep.curve_c = curve.c();
  rep.j = params.j;
  rep.k = params.k;
  rep.N = params.N;
  if (params.window) rep.window_str = params.window->str();
  rep.value = 2.0 * total.value();            // both signs of v
  rep.term_count = 2 * count;
  rep.abs_sum = 2.0 * abs_total.value();
  rep.kahan_error_bound = static_cast<double>(rep.term_count) *
                          std::numeric_limits<double>::epsilon() * rep.abs_sum;
  rep.threads = resolved;
  if (with_breakdown) rep.breakdown = std::move(breakdown);
  return rep;
}

}  // namespace

void SumParams::validate() const {
  if (!(j >= 0.0)) throw std::domain_error("params: j must be >= 0");
  if (!(k > 0.5)) throw std::domain_error("params: k must exceed 1/2");
  if (N < 1) throw std::domain_error("params: box N must be >= 1");
}

SumReport s_partial(const Curve& curve, const SumParams& params, unsigned threads,
                    bool with_breakdown) {
  double k = params.k;
  return boxed_sum(curve, params, threads, with_breakdown, "S",
                   [k](const arith::Factorization&, const arith::SquarefreeDecomposition& sf) {
                     return std::pow(std::abs(mpz_get_d(sf.s.get_mpz_t())), -k);
                   });
}

SumReport r_partial(const Curve& curve, const SumParams& params, unsigned threads,
                    bool with_breakdown) {
  double k = params.k;
  return boxed_sum(
      curve, params, threads, with_breakdown, "R",
      [k](const arith::Factorization& fac, const arith::SquarefreeDecomposition& sf) {
        auto mf = arith::square_cofactor_factors(fac);
        return std::pow(std::abs(mpz_get_d(sf.s.get_mpz_t())), -k) *
               arith::divisor_power_sum(mf, 2.0 * k);
      });
}

TBounds t_bounds(const Curve& curve, const SumParams& params, unsigned threads) {
  TBounds out;
  out.s_report = s_partial(curve, params, threads);
  out.low = out.s_report.value;
  out.high = std::pow(4.0, params.j) * out.s_report.value;
  return out;
}

}  // namespace twistrank
