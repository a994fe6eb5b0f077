#pragma once

#include <cstdint>
#include <vector>

#include "twistrank/curve.hpp"
#include "twistrank/series.hpp"

namespace twistrank {

// residues alpha in [0, d^2) with f(alpha) = 0 mod d^2
struct RootSet {
  long long d = 1;
  std::vector<long long> residues;  // sorted, no duplicates
};

// Hensel lifting from the roots mod p (unique lift at nonsingular roots,
// exhaustive p-way branch at singular ones), then CRT across the prime
// powers of d.
RootSet omega_d(const Curve& curve, long long d);

// index of the lattice {u = alpha v mod d^2, v = 0 mod d'^2}
struct TwistTriple {
  long long alpha = 0;  // in [0, d^2)
  long long d = 1;
  long long d_prime = 1;

  bool operator==(const TwistTriple&) const = default;
};

struct Vec2 {
  long long u = 0;
  long long v = 0;

  bool operator==(const Vec2&) const = default;
};

struct ReducedLattice {
  TwistTriple triple;
  Vec2 basis0, basis1;       // Lagrange-Gauss reduced basis
  Vec2 omega;                // canonical shortest nonzero vector
  Vec2 omega_prime;          // canonical shortest vector independent of omega
  unsigned long long norm_sq = 0;
  unsigned long long norm_sq_prime = 0;
  bool in_psi = false;       // gcd(omega) = 1 and F(omega) != 0
  bool F_nonzero = false;    // F(omega) != 0
  int min_vector_count = 0;  // minimal-norm vectors modulo +-
  bool psi_tie_ambiguous = false;  // tied minima disagree on Psi membership
  bool f_tie_ambiguous = false;    // tied minima disagree on F != 0
};

// Lagrange-Gauss reduction of the basis {(d^2, 0), (alpha d'^2, d'^2)}.
// Tie rule among minimal vectors: prefer v > 0, then smaller u; all-v=0
// ties resolve to u > 0. Same rule for omega_prime among independent
// vectors of the second minimum.
ReducedLattice shortest_vectors(const Curve& curve, const TwistTriple& triple);

// Lemma-of-unique-triple direction: given (u,v) in Psi and t^2 | F(u,v),
// return the unique (alpha, d, d') with dd' = t whose lattice contains
// (u, v). d = sqrt(gcd(t^2, F/v)), d' = sqrt(gcd(t^2, v)).
TwistTriple decompose_pair(const Curve& curve, long long u, long long v, long long t);

enum class Membership {
  strict_psi,  // omega in Psi: gcd = 1 and F(omega) != 0
  F_nonzero,   // only F(omega) != 0
};

const char* membership_name(Membership m);

// Q(j,k) truncated to dd' <= B: sum over coprime (d,d'), alpha in Omega_d,
// of (dd')^{2k} max(1, log dd')^{-j} ||omega||^{-4k}, with omega filtered
// by the membership test. Triples excluded by the test are tallied in
// excluded_count; tie_ambiguous_count reports triples whose tied minima
// disagree on the test.
SumReport q_partial(const Curve& curve, double j, double k, long long B,
                    Membership membership = Membership::strict_psi, unsigned threads = 0,
                    bool with_breakdown = false);

// the Q summand of a single triple (diagnostic helper)
double q_term(const Curve& curve, const TwistTriple& triple, double j, double k);

// R over the same boxed pair multiset as r_partial, but grouped by triples:
// for every t up to the box's max sqrt|F| and every triple with dd' = t,
// the lattice points of Psi inside the box are enumerated by congruence.
// Cross-check oracle for the regrouping identity.
SumReport r_via_lattices(const Curve& curve, const SumParams& params, unsigned threads = 0,
                         bool with_breakdown = false);

// annulus constants: C1 = min ||omega||/sqrt(dd'), C2 = max ||omega||/dd'
// over triples with dd' <= B and F(omega) != 0 (padded outward by 1e-9)
struct AnnulusFit {
  double C1 = 0.0;
  double C2 = 0.0;
  std::uint64_t triples = 0;
};
AnnulusFit fit_annulus_constants(const Curve& curve, long long B, unsigned threads = 0);

}  // namespace twistrank
