#include "hyperiso/curve_recovery.hpp"

#include <algorithm>
#include <numeric>

#include "hyperiso/linalg.hpp"

namespace hyperiso {

namespace {

bool p1_equal(const P1Value& a, const P1Value& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

bool p1_contains(const std::vector<P1Value>& s, const P1Value& x) {
  return std::any_of(s.begin(), s.end(), [&](const P1Value& y) { return p1_equal(x, y); });
}

/// Homogeneous coordinates (x : z).
std::pair<Fq, Fq> p1_coords(const P1Value& v, const FieldCtx* F) {
  if (!v) return {Fq(F, 1), Fq(F, 0)};
  return {v->lift_to(F), Fq(F, 1)};
}

}  // namespace

std::vector<P1Value> parameterize_trope(const Trope& trope, const std::vector<ProjPoint>& nodes, size_t fixed) {
  const size_t n = trope.c.size();
  if (n != 4) throw std::invalid_argument("parameterize_trope expects a trope in P^3");
  if (fixed >= nodes.size()) throw std::invalid_argument("fixed node out of range");
  for (const auto& p : nodes)
    if (!eval_trope(trope, p).is_zero()) throw DegenerateConic("node not on the trope");
  size_t k = 0;
  while (k < n && trope.c[k].is_zero()) ++k;
  if (k == n) throw DegenerateConic("zero trope");
  std::vector<size_t> free;
  for (size_t i = 0; i < n; ++i)
    if (i != k) free.push_back(i);
  const ProjPoint& pf = nodes[fixed];
  auto solve_it = std::find_if(free.begin(), free.end(), [&](size_t i) { return !pf[i].is_zero(); });
  if (solve_it == free.end()) throw DegenerateConic("fixed node has no free coordinate");
  const size_t is = *solve_it;
  free.erase(solve_it);
  const size_t j1 = free[0], j2 = free[1];
  const Fq r1 = pf[j1] / pf[is], r2 = pf[j2] / pf[is];

  std::vector<P1Value> out;
  for (size_t m = 0; m < nodes.size(); ++m) {
    if (m == fixed) continue;
    const ProjPoint& p = nodes[m];
    const Fq b0 = p[j1] - r1 * p[is], b1 = p[j2] - r2 * p[is];
    if (b1.is_zero()) {
      if (b0.is_zero()) throw DegenerateConic("node coincides with the fixed node");
      out.push_back(std::nullopt);
    } else {
      out.push_back(-b0 / b1);
    }
  }
  return out;
}

P1Value Mobius::operator()(const P1Value& x) const {
  if (!x) {
    if (c.is_zero()) return std::nullopt;
    return a / c;
  }
  const Fq X = x->lift_to(common_field(x->field(), a.field()));
  const Fq den = c * X + d;
  if (den.is_zero()) return std::nullopt;
  return (a * X + b) / den;
}

std::optional<Mobius> Mobius::from_points(const std::array<P1Value, 3>& from, const std::array<P1Value, 3>& to) {
  const FieldCtx* F = nullptr;
  for (const auto* s : {&from, &to})
    for (const auto& v : *s)
      if (v) F = F ? common_field(F, v->field()) : v->field();
  if (!F) return std::nullopt;
  Matrix A;
  for (int i = 0; i < 3; ++i) {
    auto [x0, x1] = p1_coords(from[i], F);
    auto [y0, y1] = p1_coords(to[i], F);
    A.push_back({x0 * y1, x1 * y1, -(x0 * y0), -(x1 * y0)});
  }
  auto ns = null_space(A, 4, F);
  if (ns.size() != 1) return std::nullopt;
  Mobius m{ns[0][0], ns[0][1], ns[0][2], ns[0][3]};
  if ((m.a * m.d - m.b * m.c).is_zero()) return std::nullopt;
  return m;
}

GlueResult glue_models(const std::vector<P1Value>& first, const std::vector<P1Value>& second) {
  const size_t n = first.size();
  if (n != second.size() || n < 4) throw std::invalid_argument("glue_models: need two sets of equal size");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
          for (size_t c = 0; c < n; ++c) {
            if (a == b || a == c || b == c) continue;
            for (size_t k = j + 1; k < n; ++k) {
              auto m = Mobius::from_points({first[i], first[j], first[k]}, {second[a], second[b], second[c]});
              if (!m) continue;
              std::vector<size_t> missed;
              for (size_t t = 0; t < n; ++t)
                if (!p1_contains(second, (*m)(first[t]))) missed.push_back(t);
              if (missed.size() != 1) continue;
              GlueResult r{second, *m, missed[0]};
              r.values.push_back((*m)(first[missed[0]]));
              return r;
            }
          }
  throw NoConsistentMap("no Mobius map matches all but one value");
}

Curve curve_from_values(const std::vector<P1Value>& values, const FieldCtx* K) {
  for (size_t i = 0; i < values.size(); ++i)
    for (size_t j = i + 1; j < values.size(); ++j)
      if (p1_equal(values[i], values[j])) throw DuplicateRoot("repeated Weierstrass value");
  const auto inf = std::find_if(values.begin(), values.end(), [](const P1Value& v) { return !v; });
  if (inf == values.end()) {
    const Fq w = values.back()->descend_to(K);
    std::vector<P1Value> moved;
    for (size_t i = 0; i + 1 < values.size(); ++i) moved.push_back((values[i]->descend_to(K) - w).inv());
    moved.push_back(std::nullopt);
    return curve_from_values(moved, K);
  }
  std::vector<Fq> rs;
  for (const auto& v : values)
    if (v) rs.push_back(v->descend_to(K));
  return Curve(K, product_of_linears(rs, K));
}

namespace {

/// lambda^n g(X / lambda) for monic g of degree n.
PolyF scale_roots(const PolyF& g, const Fq& lambda) {
  const int n = g.degree();
  std::vector<Fq> c;
  for (int i = 0; i <= n; ++i) c.push_back(g[i] * lambda.pow(static_cast<uint64_t>(n - i)));
  return PolyF(c);
}

}  // namespace

Curve quadratic_twist(const Curve& C) {
  if (C.f.degree() % 2 == 0) throw Unsupported("twist of an even-degree model");
  Fq d(C.K, 2);
  while (d.is_square()) d = d + Fq(C.K, 1);
  const Fq lc = C.f[C.f.degree()];
  return Curve(C.K, scale_roots(C.f.scale(lc.inv()), lc * d));
}

Curve resolve_twist(const Curve& D, const mpz_class& order) {
  if (D.g != 2) throw Unsupported("twist resolution by point counting is implemented for genus 2");
  const Curve T = quadratic_twist(D);
  const bool d_ok = jacobian_order_naive(D) == order, t_ok = jacobian_order_naive(T) == order;
  if (d_ok && t_ok) throw Ambiguous("curve and twist have the same Jacobian order");
  if (!d_ok && !t_ok) throw Unresolvable("neither the curve nor its twist has the given Jacobian order");
  return d_ok ? D : T;
}

namespace {

/// Branch points of Y^2 = f in P^1 over a splitting field, with the leading coefficient.
std::vector<P1Value> branch_points(const Curve& C, const FieldCtx* L) {
  std::vector<P1Value> out;
  for (const auto& [r, m] : roots_in(C.f, L)) out.push_back(r);
  if (C.f.degree() % 2 == 1) out.push_back(std::nullopt);
  return out;
}

}  // namespace

std::array<Fq, 4> igusa_clebsch(const Curve& C) {
  if (C.g != 2) throw std::invalid_argument("Igusa-Clebsch invariants need genus 2");
  if (C.p() <= 5) throw Unsupported("Igusa-Clebsch invariants need p > 5");
  const FieldCtx* L = splitting_field(C.f, C.K);
  const auto bp = branch_points(C, L);
  if (bp.size() != 6) throw DuplicateRoot("expected six branch points");
  std::vector<std::pair<Fq, Fq>> h;
  for (const auto& v : bp) h.push_back(v ? std::make_pair(*v, Fq(L, 1)) : std::make_pair(Fq(L, -1), Fq(L, 0)));
  Fq D[6][6];
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const Fq t = h[i].first * h[j].second - h[j].first * h[i].second;
      D[i][j] = t * t;
    }
  Fq s2(L, 0), s4(L, 0), s6(L, 0), s10(L, 1);
  std::array<int, 6> s;
  std::iota(s.begin(), s.end(), 0);
  do {
    auto d = [&](int a, int b) { return D[s[a]][s[b]]; };
    s2 += d(0, 1) * d(2, 3) * d(4, 5);
    const Fq tri = d(0, 1) * d(1, 2) * d(2, 0) * d(3, 4) * d(4, 5) * d(5, 3);
    s4 += tri;
    s6 += tri * d(0, 3) * d(1, 4) * d(2, 5);
  } while (std::next_permutation(s.begin(), s.end()));
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) s10 *= D[i][j];
  const Fq c = C.f[C.f.degree()].lift_to(L);
  const Fq c2 = c * c;
  std::array<Fq, 4> out = {s2 * Fq(L, 48).inv() * c2, s4 * Fq(L, 72).inv() * c2 * c2,
                           s6 * Fq(L, 12).inv() * c2 * c2 * c2, s10 * c2.pow(5ULL)};
  for (auto& x : out) x = x.descend_to(C.K);
  return out;
}

bool igusa_equivalent(const std::array<Fq, 4>& a, const std::array<Fq, 4>& b) {
  static const uint64_t w[4] = {1, 2, 3, 5};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (a[i].pow(w[j]) * b[j].pow(w[i]) != b[i].pow(w[j]) * a[j].pow(w[i])) return false;
  return true;
}

bool hyperelliptic_isomorphic(const Curve& C1, const Curve& C2) {
  if (C1.g != C2.g) return false;
  const FieldCtx* L = splitting_field(C1.f * C2.f.map([&](const Fq& x) { return x.lift_to(C1.K); }), C1.K);
  const auto b1 = branch_points(C1, L), b2 = branch_points(C2, L);
  const size_t n = b1.size();
  if (n != b2.size() || n < 3) return false;
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      for (size_t c = 0; c < n; ++c) {
        if (a == b || a == c || b == c) continue;
        auto m = Mobius::from_points({b1[0], b1[1], b1[2]}, {b2[a], b2[b], b2[c]});
        if (!m) continue;
        bool all = true;
        for (const auto& x : b1) all = all && p1_contains(b2, (*m)(x));
        if (all) return true;
      }
  return false;
}

Genus2Recovery recover_genus2(Level2Family& fam, Rng& rng, bool with_a3) {
  Genus2Recovery r;
  r.nodes = nodes_algorithm1(fam, rng, with_a3);
  std::vector<ProjPoint> pts;
  for (const auto& n : r.nodes.nodes) pts.push_back(n.p);
  const Fq one(fam.curve().K, 1), zero = one.zero();
  const Trope z1{TwoTorsionLabel::parse(2, "a6"), {one, zero, zero, zero}};
  r.params_a6 = parameterize_trope(z1, pts, 5);
  r.params_a1 = parameterize_trope(z1, pts, 0);
  r.glued = glue_models(r.params_a6, r.params_a1);
  r.D = curve_from_values(r.glued.values, fam.curve().K);
  return r;
}

}  // namespace hyperiso
