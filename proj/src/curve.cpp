#include "twistrank/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace twistrank {

namespace {

using arith::to_mpz;

// bisection to ~1e-13, then Newton polish
double refine_root(const Curve& cv, double lo, double hi) {
  double flo = cv.f_real(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = cv.f_real(mid);
    if (fm == 0.0) { lo = hi = mid; break; }
    if ((flo < 0) == (fm < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  double a = static_cast<double>(cv.a()), b = static_cast<double>(cv.b());
  for (int i = 0; i < 8; ++i) {
    double fx = cv.f_real(x);
    double dfx = (3.0 * x + 2.0 * a) * x + b;
    if (dfx == 0.0) break;
    double step = fx / dfx;
    x -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

mpq_class to_mpq(double x) {
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

const mpq_class& snap_tolerance() {
  static const mpq_class tol(1, 1000000000000L);  // 1e-12 exactly as a rational
  return tol;
}

bool parse_rational(const std::string& tok, mpq_class& out) {
  if (tok.empty()) return false;
  auto slash = tok.find('/');
  if (slash != std::string::npos) {
    mpq_class q;
    if (mpq_set_str(q.get_mpq_t(), tok.c_str(), 10) != 0) return false;
    if (q.get_den() == 0) return false;
    mpq_canonicalize(q.get_mpq_t());
    out = q;
    return true;
  }
  auto dot = tok.find('.');
  if (dot == std::string::npos) {
    mpz_class z;
    if (mpz_set_str(z.get_mpz_t(), tok.c_str(), 10) != 0) return false;
    out = mpq_class(z);
    return true;
  }
  std::string digits = tok.substr(0, dot) + tok.substr(dot + 1);
  std::size_t frac_len = tok.size() - dot - 1;
  if (frac_len == 0 || digits.empty() || digits == "-" || digits == "+") return false;
  mpz_class num;
  if (mpz_set_str(num.get_mpz_t(), digits.c_str(), 10) != 0) return false;
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
  mpq_class q(num, den);
  mpq_canonicalize(q.get_mpq_t());
  out = q;
  return true;
}

std::string rational_str(const mpq_class& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

}  // namespace

Curve::Curve(long long a, long long b, long long c) : a_(a), b_(b), c_(c) {
  mpz_class A = to_mpz(a), B = to_mpz(b), C = to_mpz(c);
  // disc(x^3 + ax^2 + bx + c) = 18abc - 4a^3c + a^2b^2 - 4b^3 - 27c^2
  disc_ = 18 * A * B * C - 4 * A * A * A * C + A * A * B * B - 4 * B * B * B - 27 * C * C;
  if (disc_ == 0) throw std::domain_error("repeated root");

  double M = 1.0 + std::max({std::abs((double)a), std::abs((double)b), std::abs((double)c)});
  if (disc_ > 0) {
    // three distinct real roots, separated by the critical points
    double ad = (double)a, bd = (double)b;
    double disc_quad = ad * ad - 3.0 * bd;  // positive here
    double sq = std::sqrt(disc_quad);
    double r1 = (-ad - sq) / 3.0, r2 = (-ad + sq) / 3.0;
    roots_.push_back(refine_root(*this, -M - 1.0, r1));
    roots_.push_back(refine_root(*this, r1, r2));
    roots_.push_back(refine_root(*this, r2, M + 1.0));
  } else {
    roots_.push_back(refine_root(*this, -M - 1.0, M + 1.0));
  }
  std::sort(roots_.begin(), roots_.end());
}

mpz_class Curve::F(const mpz_class& u, const mpz_class& v) const {
  mpz_class g = u * u * u + to_mpz(a_) * u * u * v + to_mpz(b_) * u * v * v + to_mpz(c_) * v * v * v;
  return v * g;
}

mpz_class Curve::F(long long u, long long v) const { return F(to_mpz(u), to_mpz(v)); }

mpq_class Curve::f_at(const mpq_class& x) const {
  return x * x * x + to_mpz(a_) * x * x + to_mpz(b_) * x + to_mpz(c_);
}

double Curve::f_real(double x) const {
  return ((x + static_cast<double>(a_)) * x + static_cast<double>(b_)) * x + static_cast<double>(c_);
}

double naive_height(long long u, long long v) {
  if (v == 0) throw std::domain_error("naive_height: v must be nonzero");
  if (std::gcd(u, v) != 1) throw std::domain_error("naive_height: u/v must be in lowest terms");
  double h = 1.0;
  if (u != 0) h = std::max(h, std::log(std::abs(static_cast<double>(u))));
  h = std::max(h, std::log(std::abs(static_cast<double>(v))));
  return h;
}

WindowX WindowX::everything() {
  WindowX w;
  Interval iv;
  iv.lo_infinite = iv.hi_infinite = true;
  w.ivs_.push_back(iv);
  return w;
}

WindowX WindowX::from_intervals(std::vector<Interval> ivs) {
  for (const auto& iv : ivs) {
    if (!iv.lo_infinite && !iv.hi_infinite && iv.lo >= iv.hi)
      throw std::invalid_argument("window: empty interval");
  }
  std::sort(ivs.begin(), ivs.end(), [](const Interval& x, const Interval& y) {
    if (x.lo_infinite != y.lo_infinite) return x.lo_infinite;
    if (x.lo_infinite) return false;
    return x.lo < y.lo;
  });
  for (std::size_t i = 1; i < ivs.size(); ++i) {
    const Interval& p = ivs[i - 1];
    const Interval& q = ivs[i];
    if (p.hi_infinite || q.lo_infinite || q.lo < p.hi)
      throw std::invalid_argument("window: intervals must be disjoint");
  }
  WindowX w;
  w.ivs_ = std::move(ivs);
  return w;
}

WindowX WindowX::parse(const std::string& text) {
  std::vector<Interval> ivs;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string piece = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    pos = comma == std::string::npos ? text.size() : comma + 1;
    auto dots = piece.find("..");
    if (dots == std::string::npos) throw std::invalid_argument("window: expected lo..hi in '" + piece + "'");
    std::string lo_tok = piece.substr(0, dots);
    std::string hi_tok = piece.substr(dots + 2);
    Interval iv;
    if (lo_tok == "-inf" || lo_tok == "inf")
      iv.lo_infinite = (lo_tok == "-inf");
    if (lo_tok == "inf") throw std::invalid_argument("window: lower endpoint cannot be +inf");
    if (!iv.lo_infinite && !parse_rational(lo_tok, iv.lo))
      throw std::invalid_argument("window: bad endpoint '" + lo_tok + "'");
    if (hi_tok == "inf")
      iv.hi_infinite = true;
    else if (hi_tok == "-inf")
      throw std::invalid_argument("window: upper endpoint cannot be -inf");
    else if (!parse_rational(hi_tok, iv.hi))
      throw std::invalid_argument("window: bad endpoint '" + hi_tok + "'");
    ivs.push_back(std::move(iv));
  }
  if (ivs.empty()) throw std::invalid_argument("window: empty specification");
  return from_intervals(std::move(ivs));
}

bool WindowX::contains(const mpq_class& x) const {
  for (const auto& iv : ivs_) {
    bool above = iv.lo_infinite || x > iv.lo;
    bool below = iv.hi_infinite || x < iv.hi;
    if (above && below) return true;
  }
  return false;
}

bool WindowX::contains(long long u, long long v) const {
  mpq_class x(arith::to_mpz(u), arith::to_mpz(v));
  mpq_canonicalize(x.get_mpq_t());
  return contains(x);
}

bool WindowX::covers_everything() const {
  return ivs_.size() == 1 && ivs_[0].lo_infinite && ivs_[0].hi_infinite;
}

bool WindowX::is_broad(const Curve& curve) const {
  mpq_class lo_root = to_mpq(curve.e_min());
  mpq_class hi_root = to_mpq(curve.e_max());
  bool meets_left = false, meets_right = false;
  for (const auto& iv : ivs_) {
    // open overlap with (-inf, e_min): need lo < e_min
    if (iv.lo_infinite || iv.lo < lo_root) meets_left = true;
    // open overlap with (e_max, inf): need hi > e_max
    if (iv.hi_infinite || iv.hi > hi_root) meets_right = true;
  }
  return meets_left && meets_right;
}

std::string WindowX::str() const {
  std::string out;
  for (std::size_t i = 0; i < ivs_.size(); ++i) {
    if (i) out += ',';
    out += ivs_[i].lo_infinite ? "-inf" : rational_str(ivs_[i].lo);
    out += "..";
    out += ivs_[i].hi_infinite ? "inf" : rational_str(ivs_[i].hi);
  }
  return out;
}

WindowX default_broad_window(const Curve& curve) {
  const mpq_class& tol = snap_tolerance();
  mpq_class emin = to_mpq(curve.e_min());
  mpq_class emax = to_mpq(curve.e_max());
  Interval left;
  left.lo = emin - 2 - tol;
  left.hi = emin - 1 - tol;
  Interval right;
  right.lo = emax + 1 + tol;
  right.hi = emax + 2 + tol;
  return WindowX::from_intervals({left, right});
}

}  // namespace twistrank
