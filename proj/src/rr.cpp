#include "hyperiso/rr.hpp"

#include <algorithm>

namespace hyperiso {

namespace {

const FieldCtx* field_of(const Curve& C, const Divisor& D) { return divisor_field(D, C.K); }

PolyF one_poly(const FieldCtx* F) { return PolyF::constant(Fq(F, 1)); }

void scale_exponents(FactoredFunction& F, int64_t k) {
  for (auto& fe : F.factors) fe.second *= k;
}

void append(FactoredFunction& F, const FactoredFunction& G) {
  F.factors.insert(F.factors.end(), G.factors.begin(), G.factors.end());
}

/// Returns R3 and appends phi with (R1 - d1 O) + (R2 - d2 O) = (R3 - d3 O) + div(phi).
Divisor add_with_certificate(const Curve& C, const Divisor& a, const Divisor& b, FactoredFunction& F) {
  const FieldCtx* L = common_field(field_of(C, a), field_of(C, b));
  const PolyF f = poly_lift(C.f, L);
  auto cr = cantor_compose(a, b, f, Fq(L, 1));
  if (cr.d.degree() > 0) F.factors.push_back({{cr.d, PolyF(), one_poly(L)}, 1});
  Divisor D = cr.D;
  while (D.u.degree() > C.g) {
    Divisor nxt = cantor_reduce_step(D, f);
    F.factors.push_back({{-D.v, one_poly(L), nxt.u}, 1});
    D = nxt;
  }
  D.v = D.v % D.u;
  return D;
}

/// F with div F = e (A - deg(A) O) - (R - deg(R) O); returns R.
Divisor miller(const Curve& C, const Divisor& A, int64_t e, FactoredFunction& F) {
  const FieldCtx* L = field_of(C, A);
  if (e == 0 || A.is_zero()) return zero_divisor(L);
  const uint64_t k = static_cast<uint64_t>(e < 0 ? -e : e);
  int top = 63;
  while (!((k >> top) & 1)) --top;
  FactoredFunction G;
  Divisor R = A;
  for (int i = top - 1; i >= 0; --i) {
    scale_exponents(G, 2);
    R = add_with_certificate(C, R, R, G);
    if ((k >> i) & 1) R = add_with_certificate(C, R, A, G);
  }
  if (e < 0) {
    scale_exponents(G, -1);
    G.factors.push_back({{R.u, PolyF(), one_poly(L)}, -1});
    R = negate(R);
  }
  append(F, G);
  return R;
}

int root_multiplicity(const PolyF& a, const Fq& x) {
  if (a.is_zero()) return 1 << 20;
  int m = 0;
  PolyF q = a;
  const PolyF lin = PolyF::linear_root(x);
  while (q.degree() > 0 && q.eval(x).is_zero()) {
    q = q / lin;
    ++m;
  }
  return m;
}

bool semi_reduced_ok(const Curve& C, const Divisor& D) {
  if (D.u.is_zero() || !D.u.is_monic()) return false;
  if (!D.v.is_zero() && D.v.degree() >= D.u.degree()) return false;
  const FieldCtx* L = field_of(C, D);
  return ((D.v * D.v - poly_lift(C.f, L)) % D.u).is_zero();
}

bool avoids(const Divisor& A, const std::vector<Point>& avoid) {
  for (const auto& P : avoid) {
    if (P.inf) continue;
    if (A.u.eval(P.x).is_zero()) return false;
  }
  return true;
}

}  // namespace

RRBasis rr_basis(const Curve& C, const Divisor& A) {
  const FieldCtx* L = field_of(C, A);
  const int d = A.u.degree();
  if (d > 2 * C.g - 1) throw DegenerateDivisor("affine part too large for a degree 2g-1 divisor");
  const int na = (2 * C.g - 1 + d) / 2 + 1;
  const int nb = d >= 2 ? (d - 2) / 2 + 1 : 0;
  Matrix M(d, Vector(na + nb, Fq(L, 0)));
  const PolyF one = one_poly(L);
  for (int i = 0; i < na; ++i) {
    PolyF r = one.shift_up(i) % A.u;
    for (int j = 0; j <= r.degree(); ++j) M[j][i] = r[j];
  }
  for (int i = 0; i < nb; ++i) {
    PolyF r = (-(A.v.shift_up(i))) % A.u;
    for (int j = 0; j <= r.degree(); ++j) M[j][na + i] = r[j];
  }
  auto ns = null_space(M, na + nb, L);
  if (static_cast<int>(ns.size()) != C.g) throw DegenerateDivisor("Riemann-Roch space has unexpected dimension");
  RRBasis B{A, {}};
  for (const auto& vec : ns) {
    std::vector<Fq> ac(vec.begin(), vec.begin() + na), bc(vec.begin() + na, vec.end());
    B.ab.push_back({PolyF(ac), PolyF(bc)});
  }
  return B;
}

FactoredFunction principal_function(const Curve& C, const std::vector<std::pair<Divisor, int64_t>>& terms) {
  FactoredFunction F;
  Divisor R = zero_divisor(C.K);
  for (const auto& [A, e] : terms) {
    Divisor Ri = miller(C, A, e, F);
    R = add_with_certificate(C, R, Ri, F);
  }
  if (!R.is_zero()) throw NotPrincipal("cycle does not sum to zero on the Jacobian");
  return F;
}

EffectiveDivisor choose_representative_divisor(const Curve& C, const Divisor& u, const std::vector<Point>& avoid) {
  const int top = 2 * C.g - 1;
  EffectiveDivisor E{u, top - u.u.degree()};
  if (avoids(u, avoid)) return E;
  const FieldCtx* L = field_of(C, u);
  for (const auto& P : avoid)
    if (!P.inf) L = common_field(L, P.x.field());
  RRBasis B = rr_basis(C, lift_divisor(u, L));
  const PolyF f = poly_lift(C.f, L);
  const Divisor red = cantor_reduce(lift_divisor(u, L), f, C.g);
  for (uint64_t c = 1; c < 200; ++c) {
    PolyF a = B.ab[0].first, b = B.ab[0].second;
    Fq s(L, static_cast<int64_t>(c));
    for (size_t k = 1; k < B.ab.size(); ++k) {
      a = a + B.ab[k].first.scale(s);
      b = b + B.ab[k].second.scale(s);
      s = s * Fq(L, static_cast<int64_t>(c));
    }
    if (b.is_zero()) continue;
    PolyF N = a * a - f * b * b;
    auto qr = divmod(N, B.A.u);
    if (!qr.second.is_zero() || qr.first.is_zero()) continue;
    PolyF uz = qr.first.monic();
    if (uz.degree() > top) continue;
    auto xg = xgcd(b % uz, uz, Fq(L, 1));
    if (uz.degree() > 0 && xg.g.degree() != 0) continue;
    PolyF vz = uz.degree() > 0 ? ((-a) * xg.s) % uz : PolyF();
    Divisor Z{uz, vz};
    if (!semi_reduced_ok(C, Z)) continue;
    if (cantor_reduce(Z, f, C.g) != red) continue;
    if (!avoids(Z, avoid)) continue;
    return {Z, top - uz.degree()};
  }
  throw CannotAvoid("no representative divisor avoids the given support");
}

std::optional<Fq> eval_at_point(const PlaneFunction& f, const Point& P) {
  if (P.inf) return std::nullopt;
  Fq den = f.c.eval(P.x);
  if (den.is_zero()) return std::nullopt;
  return (f.a.eval(P.x) + P.y * f.b.eval(P.x)) * den.inv();
}

std::optional<Fq> eval_at_point(const FactoredFunction& h, const Point& P) {
  Fq acc = P.inf ? Fq() : P.x.one();
  for (const auto& [phi, e] : h.factors) {
    auto v = eval_at_point(phi, P);
    if (!v) return std::nullopt;
    if (e < 0 && v->is_zero()) return std::nullopt;
    Fq t = e < 0 ? v->inv() : *v;
    acc = acc * t.pow(static_cast<uint64_t>(e < 0 ? -e : e));
  }
  return acc;
}

int valuation_numerator(const Curve& C, const PolyF& a, const PolyF& b, const Point& P) {
  constexpr int kInf = 1 << 20;
  if (a.is_zero() && b.is_zero()) return kInf;
  if (P.inf) {
    const int va = a.is_zero() ? kInf : -2 * a.degree();
    const int vb = b.is_zero() ? kInf : -(2 * C.g + 1) - 2 * b.degree();
    return std::min(va, vb);
  }
  if (P.y.is_zero()) {
    const int ma = root_multiplicity(a, P.x), mb = root_multiplicity(b, P.x);
    return std::min(ma >= kInf ? kInf : 2 * ma, mb >= kInf ? kInf : 1 + 2 * mb);
  }
  const int bound = std::max(2 * std::max(a.degree(), 0), 2 * std::max(b.degree(), 0) + 2 * C.g + 1) + 2;
  const FieldCtx* L = P.x.field();
  Series t = Series::linear(P.x, Fq(L, 1), bound);
  Series y = poly_lift(C.f, L).eval(t).sqrt(P.y);
  Series s = poly_lift(a, L).eval(t) + y * poly_lift(b, L).eval(t);
  return s.valuation();
}

int valuation_poly(const Curve& C, const PolyF& c, const Point& P) {
  if (P.inf) return -2 * c.degree();
  const int m = root_multiplicity(c, P.x);
  (void)C;
  return P.y.is_zero() ? 2 * m : m;
}

int valuation(const Curve& C, const PlaneFunction& f, const Point& P) {
  return valuation_numerator(C, f.a, f.b, P) - valuation_poly(C, f.c, P);
}

}  // namespace hyperiso
