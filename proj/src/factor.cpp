#include "hyperiso/factor.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

namespace hyperiso {

PolyF poly_lift(const PolyF& f, const FieldCtx* F) {
  return f.map([F](const Fq& a) { return a.lift_to(F); });
}

const FieldCtx* poly_field(const PolyF& f, const FieldCtx* fallback) {
  const FieldCtx* F = fallback;
  for (const auto& a : f.coeffs()) {
    if (!F) {
      F = a.field();
      continue;
    }
    const FieldCtx* c = common_field(F, a.field());
    if (!c) throw FieldMismatch("polynomial coefficients in incomparable levels");
    F = c;
  }
  return F;
}

PolyF poly_from_ints(const FieldCtx* F, const std::vector<int64_t>& c) {
  std::vector<Fq> v;
  for (int64_t x : c) v.emplace_back(F, x);
  return PolyF(v);
}

bool poly_less(const PolyF& a, const PolyF& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    if (a[i] != b[i]) return a[i].canonical_less(b[i]);
  }
  return false;
}

namespace {

// p-th root of a polynomial in X^p over a finite field.
PolyF pth_root(const PolyF& f, const FieldCtx* K) {
  const uint64_t p = K->p;
  mpz_class e = K->order / p;  // a^(q/p) is the inverse Frobenius
  std::vector<Fq> c;
  for (int i = 0; i <= f.degree(); i += static_cast<int>(p)) c.push_back(f[i].lift_to(K).pow(e));
  return PolyF(c);
}

std::vector<std::pair<PolyF, int>> squarefree_rec(const PolyF& f, const FieldCtx* K) {
  std::vector<std::pair<PolyF, int>> out;
  if (f.degree() <= 0) return out;
  const Fq one(K, 1);
  PolyF df = f.derivative();
  if (df.is_zero()) {
    for (auto& [g, m] : squarefree_rec(pth_root(f, K), K)) out.push_back({g, m * static_cast<int>(K->p)});
    return out;
  }
  PolyF c = gcd(f, df);
  PolyF w = f / c;
  int i = 1;
  while (w.degree() > 0) {
    PolyF y = gcd(w, c);
    PolyF z = w / y;
    if (z.degree() > 0) out.push_back({z.monic(), i});
    ++i;
    w = y;
    c = c / y;
  }
  if (c.degree() > 0) {
    for (auto& [g, m] : squarefree_rec(pth_root(c, K), K)) out.push_back({g, m * static_cast<int>(K->p)});
  }
  return out;
}

// Distinct-degree factorisation of a squarefree monic f: (product of degree-d factors, d).
std::vector<std::pair<PolyF, int>> ddf(PolyF f, const FieldCtx* K) {
  std::vector<std::pair<PolyF, int>> out;
  const Fq one(K, 1);
  const PolyF X = PolyF::x(one);
  PolyF h = X % f;
  for (int d = 1; 2 * d <= f.degree(); ++d) {
    h = powmod(h, K->order, f, one);
    PolyF g = gcd(h - X, f);
    if (g.degree() > 0) {
      out.push_back({g, d});
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.push_back({f.monic(), f.degree()});
  return out;
}

void edf(const PolyF& f, int d, const FieldCtx* K, Rng& rng, std::vector<PolyF>& out) {
  if (f.degree() == d) {
    out.push_back(f.monic());
    return;
  }
  const Fq one(K, 1);
  mpz_class e = K->order;
  mpz_pow_ui(e.get_mpz_t(), K->order.get_mpz_t(), d);
  e = (e - 1) / 2;
  while (true) {
    std::vector<Fq> c;
    for (int i = 0; i < f.degree(); ++i) c.push_back(random_element(K, rng));
    PolyF a(c);
    if (a.degree() <= 0) continue;
    PolyF b = powmod(a, e, f, one) - PolyF::constant(one);
    PolyF g = gcd(b, f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      edf(g, d, K, rng, out);
      edf(f / g, d, K, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<PolyF, int>> squarefree(const PolyF& f) {
  const FieldCtx* K = poly_field(f);
  return squarefree_rec(poly_lift(f, K).monic(), K);
}

std::vector<std::pair<PolyF, int>> factor(const PolyF& f) {
  std::vector<std::pair<PolyF, int>> out;
  if (f.degree() <= 0) return out;
  const FieldCtx* K = poly_field(f);
  Rng rng(0x5eed + f.degree());
  for (auto& [g, m] : squarefree(f)) {
    for (auto& [h, d] : ddf(g, K)) {
      std::vector<PolyF> parts;
      edf(h, d, K, rng, parts);
      for (auto& q : parts) out.push_back({q, m});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  return out;
}

bool is_irreducible_poly(const PolyF& f) {
  const int n = f.degree();
  if (n <= 0) return false;
  if (n == 1) return true;
  const FieldCtx* K = poly_field(f);
  const PolyF m = poly_lift(f, K);
  const Fq one(K, 1);
  const PolyF X = PolyF::x(one);
  std::vector<PolyF> frob{X % m};
  for (int i = 1; i <= n; ++i) frob.push_back(powmod(frob.back(), K->order, m, one));
  if (frob[n] != X % m) return false;
  for (int r = 2; r <= n; ++r) {
    if (n % r) continue;
    bool prime = true;
    for (int d = 2; d * d <= r; ++d)
      if (r % d == 0) prime = false;
    if (!prime) continue;
    if (gcd(frob[n / r] - X, m).degree() != 0) return false;
  }
  return true;
}

std::vector<std::pair<Fq, int>> roots(const PolyF& f) {
  std::vector<std::pair<Fq, int>> out;
  for (auto& [g, m] : factor(f)) {
    if (g.degree() == 1) out.push_back({-g[0], m});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first.canonical_less(b.first); });
  return out;
}

std::vector<std::pair<Fq, int>> roots_in(const PolyF& f, const FieldCtx* F) { return roots(poly_lift(f, F)); }

const FieldCtx* extension_of_degree(const FieldCtx* K, int d) {
  if (d == 1) return K;
  static std::mutex mu;
  static std::map<std::pair<const FieldCtx*, int>, const FieldCtx*> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({K, d});
    if (it != cache.end()) return it->second;
  }
  if (K->degree * d > kMaxDegree) throw std::invalid_argument("extension degree exceeds supported maximum");
  Rng rng(K->p * 1000003ULL + static_cast<uint64_t>(d) * 7919ULL + static_cast<uint64_t>(K->degree));
  const FieldCtx* L = nullptr;
  // Prefer sparse trinomials X^d + X + c, then random monic polynomials.
  for (int64_t c = 1; c < 200 && !L; ++c) {
    std::vector<Fq> co(d + 1, Fq(K, 0));
    co[0] = Fq(K, c);
    co[1] = Fq(K, 1);
    co[d] = Fq(K, 1);
    if (is_irreducible_poly(PolyF(co))) L = extend_field(K, co);
  }
  while (!L) {
    std::vector<Fq> co;
    for (int i = 0; i < d; ++i) co.push_back(random_element(K, rng));
    co.push_back(Fq(K, 1));
    if (is_irreducible_poly(PolyF(co))) L = extend_field(K, co);
  }
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.insert({{K, d}, L});
  return it->second;
}

const FieldCtx* splitting_field(const PolyF& f, const FieldCtx* K) {
  int l = 1;
  for (auto& [g, m] : factor(poly_lift(f, K))) l = std::lcm(l, g.degree());
  return extension_of_degree(K, l);
}

PolyF product_of_linears(const std::vector<Fq>& rs, const FieldCtx* F) {
  PolyF u = PolyF::constant(Fq(F, 1));
  for (const auto& r : rs) u = u * PolyF::linear_root(r.lift_to(F));
  return u;
}

PolyF interpolate(const std::vector<Fq>& xs, const std::vector<Fq>& ys) {
  const size_t n = xs.size();
  if (n == 0) return PolyF();
  const FieldCtx* F = xs[0].field();
  for (const auto& a : xs) F = common_field(F, a.field());
  for (const auto& a : ys) F = common_field(F, a.field());
  if (!F) throw FieldMismatch("interpolation data in incomparable levels");
  PolyF acc;
  for (size_t i = 0; i < n; ++i) {
    PolyF li = PolyF::constant(Fq(F, 1));
    Fq denom(F, 1);
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      li = li * PolyF::linear_root(xs[j].lift_to(F));
      denom = denom * (xs[i] - xs[j]);
    }
    acc = acc + li.scale(ys[i] * denom.inv());
  }
  return acc;
}

}  // namespace hyperiso
