#include "hyperiso/fraction.hpp"

#include <algorithm>

namespace hyperiso {

Series expand_fraction(const PolyF& num, const PolyF& den, int prec, const FieldCtx* F) {
  Series n = Series::from_coeffs(F, num.coeffs(), prec);
  Series d = Series::from_coeffs(F, den.coeffs(), prec);
  if (!d.is_unit()) throw NonUnit("denominator vanishes at t = 0");
  return n / d;
}

namespace {

// Sum of c[i] t^(val + i), known modulo t^(val + c.size()).
struct Laurent {
  int val = 0;
  std::vector<Fq> c;
};

// Converts h(1/t)/k(1/t) into N(t)/D(t) with D(0) = 1; false if the quotient has a pole at 0.
bool to_fraction(const PolyF& h, const PolyF& k, const FieldCtx* F, PolyF& N, PolyF& D) {
  if (k.is_zero()) return false;
  const int M = std::max(h.degree(), k.degree());
  std::vector<Fq> nc(M + 1, Fq(F, 0)), dc(M + 1, Fq(F, 0));
  for (int i = 0; i <= h.degree(); ++i) nc[M - i] = h[i];
  for (int i = 0; i <= k.degree(); ++i) dc[M - i] = k[i];
  // strip common powers of t
  size_t s = 0;
  while (s < nc.size() && s < dc.size() && nc[s].is_zero() && dc[s].is_zero()) ++s;
  nc.erase(nc.begin(), nc.begin() + s);
  dc.erase(dc.begin(), dc.begin() + s);
  if (dc.empty() || dc[0].is_zero()) return false;
  const Fq inv = dc[0].inv();
  N = PolyF(nc).scale(inv);
  D = PolyF(dc).scale(inv);
  return true;
}

}  // namespace

std::pair<PolyF, PolyF> reconstruct_fraction(const Series& s, int max_num, int max_den) {
  const FieldCtx* F = s.field();
  const int prec = s.prec();
  const Fq one(F, 1);
  const int max_iter = max_num + max_den + 2;
  if (prec < max_num + max_den + 1) throw InsufficientPrecision("series too short for the requested degrees");

  Laurent x{0, s.coeffs()};
  PolyF h_prev2, h_prev = PolyF::constant(one);  // h_{-2} = 0, h_{-1} = 1
  PolyF k_prev2 = PolyF::constant(one), k_prev;  // k_{-2} = 1, k_{-1} = 0
  for (int it = 0; it < max_iter; ++it) {
    // Partial quotient: the part of x of degree <= 0, as a polynomial in 1/t.
    std::vector<Fq> a(std::max(-x.val, 0) + 1, Fq(F, 0));
    size_t split = 0;
    for (; split < x.c.size() && x.val + static_cast<int>(split) <= 0; ++split)
      a[-(x.val + static_cast<int>(split))] = x.c[split];
    PolyF q(a);
    PolyF h = q * h_prev + h_prev2;
    PolyF k = q * k_prev + k_prev2;
    PolyF N, D;
    if (to_fraction(h, k, F, N, D) && N.degree() <= max_num && D.degree() <= max_den) {
      if (expand_fraction(N, D, prec, F) == s) {
        PolyF g = gcd(N, D);
        if (g.degree() > 0) {
          N = N / g;
          D = D / g;
          const Fq inv = D[0].inv();
          N = N.scale(inv);
          D = D.scale(inv);
        }
        return {N, D};
      }
    }
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;

    // Tail of positive degree, then invert it.
    std::vector<Fq> tail(x.c.begin() + split, x.c.end());
    const int tail_start = x.val + static_cast<int>(split);
    size_t v = 0;
    while (v < tail.size() && tail[v].is_zero()) ++v;
    if (v == tail.size()) break;
    std::vector<Fq> rel(tail.begin() + v, tail.end());
    Series r = Series::from_coeffs(F, rel, static_cast<int>(rel.size())).inv();
    x.val = -(tail_start + static_cast<int>(v));
    x.c = r.coeffs();
  }
  throw NoConvergence("continued fraction did not produce a fraction within the degree bounds");
}

}  // namespace hyperiso
