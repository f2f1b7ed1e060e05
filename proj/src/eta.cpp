#include "hyperiso/eta.hpp"

#include <algorithm>

namespace hyperiso {

namespace {

template <class R, class Conv>
std::optional<RingFraction<R>> raw_generic(const Curve& C, const std::vector<EtaContext::Term>& terms,
                                           const FactoredFunction& h, const Poly<R>& ux, const Poly<R>& vx,
                                           const R& proto, Conv conv, bool (*unit)(const R&)) {
  if (ux.degree() != C.g) return std::nullopt;
  RingFraction<R> acc = alpha_symmetric(h, ux, vx, proto, conv);
  for (const auto& t : terms) {
    std::vector<Poly<R>> ps;
    for (const auto& [a, b] : t.basis.ab) ps.push_back(conv(a) + vx * conv(b));
    R dC = det_laplace(coeff_rows(ps, ux, proto));
    R nU = norm_mod(conv(t.D.A.u), ux, proto);
    const uint64_t m = static_cast<uint64_t>(t.e < 0 ? -t.e : t.e);
    if (t.e > 0) {
      acc.num = acc.num * ring_pow(dC, m);
      acc.den = acc.den * ring_pow(nU, m);
    } else {
      acc.num = acc.num * ring_pow(nU, m);
      acc.den = acc.den * ring_pow(dC, m);
    }
  }
  if (!unit(acc.den)) return std::nullopt;
  return acc;
}

bool fq_unit(const Fq& a) { return !a.is_zero(); }
bool series_any(const Series&) { return true; }

}  // namespace

Divisor cycle_sum(const Curve& C, const Cycle& c) {
  Divisor s = zero_divisor(C.K);
  for (const auto& [u, e] : c.terms) s = cantor_add(C, s, scalar_mul(C, e, u));
  return s;
}

int64_t cycle_degree(const Cycle& c) {
  int64_t d = 0;
  for (const auto& t : c.terms) d += t.second;
  return d;
}

Cycle normalize_cycle(const Curve& C, const Cycle& c) {
  Cycle full = c;
  Divisor s = cycle_sum(C, c);
  full.add(s, -1);
  Cycle out;
  for (const auto& [u, e] : full.terms) {
    if (e == 0 || u.is_zero()) continue;
    auto it = std::find_if(out.terms.begin(), out.terms.end(), [&](const auto& t) { return t.first == u; });
    if (it == out.terms.end())
      out.terms.push_back({u, e});
    else
      it->second += e;
  }
  out.terms.erase(std::remove_if(out.terms.begin(), out.terms.end(), [](const auto& t) { return t.second == 0; }),
                  out.terms.end());
  return out;
}

EtaContext::EtaContext(const Curve& C, const Cycle& cycle, const Divisor& y)
    : C_(C), cycle_(normalize_cycle(C, cycle)), y_(y) {
  if (y.u.degree() != C.g) throw BadBasePoint("base point must have a degree-g Mumford representation");
  build({});
  auto r = raw_value(y_);
  if (!r || r->is_zero()) {
    const FieldCtx* split = nullptr;
    std::vector<Point> avoid = mumford_decompose(C_, y_, &split);
    build(avoid);
    r = raw_value(y_);
    if (!r || r->is_zero()) throw BadBasePoint("base point lies in the support of the eta divisor");
  }
  Ey_ = *r;
}

EtaContext::EtaContext(const Curve& C, const Cycle& cycle) : C_(C), cycle_(normalize_cycle(C, cycle)) {
  y_ = zero_divisor(C.K);
  build({});
  Ey_ = Fq(C.K, 1);
}

EtaContext EtaContext::unnormalized(const Curve& C, const Cycle& cycle) { return EtaContext(C, cycle); }

std::optional<Fq> EtaContext::raw_value(const Divisor& x) const {
  if (auto r = raw(x)) return r->num * r->den.inv();
  const FieldCtx* F = divisor_field(x, C_.K);
  for (const auto& t : terms_) F = common_field(F, divisor_field(t.D.A, C_.K));
  for (int prec : {8, 24}) {
    const FieldCtx* L = nullptr;
    auto xs = deform_divisor(C_, lift_divisor(x, F), prec, &L);
    if (!xs) return std::nullopt;
    auto r = raw_formal(*xs);
    if (!r) continue;
    const int vn = r->num.valuation(), vd = r->den.valuation();
    if (vd >= r->den.prec()) continue;
    if (vn > vd) return Fq(F, 0);
    if (vn < vd) return std::nullopt;
    Fq val = r->num[vn] * r->den[vd].inv();
    return val.descend_to(F);
  }
  return std::nullopt;
}

void EtaContext::build(const std::vector<Point>& avoid) {
  terms_.clear();
  std::vector<std::pair<Divisor, int64_t>> mt;
  for (const auto& [u, e] : cycle_.terms) {
    EffectiveDivisor D = choose_representative_divisor(C_, u, avoid);
    terms_.push_back({D, rr_basis(C_, D.A), e});
    mt.push_back({D.A, e});
  }
  h_ = principal_function(C_, mt);
}

std::optional<RingFraction<Fq>> EtaContext::raw(const Divisor& x) const {
  const FieldCtx* F = divisor_field(x, C_.K);
  for (const auto& t : terms_) F = common_field(F, divisor_field(t.D.A, C_.K));
  auto conv = [F](const PolyF& p) { return poly_lift(p, F); };
  return raw_generic<Fq>(C_, terms_, h_, conv(x.u), conv(x.v), Fq(F, 1), conv, fq_unit);
}

std::optional<RingFraction<Series>> EtaContext::raw_formal(const SeriesDivisor& x) const {
  const FieldCtx* F = common_field(series_divisor_field(x), C_.K);
  for (const auto& t : terms_) F = common_field(F, divisor_field(t.D.A, C_.K));
  const int prec = series_divisor_prec(x);
  auto lift = [F](const Poly<Series>& p) { return p.map([F](const Series& s) { return s.lift_to(F); }); };
  auto conv = [F, prec](const PolyF& p) { return series_poly(p, prec, F); };
  Series proto = Series::constant(Fq(F, 1), prec);
  return raw_generic<Series>(C_, terms_, h_, lift(x.u), lift(x.v), proto, conv, series_any);
}

std::optional<Fq> EtaContext::eval(const Divisor& x) const {
  auto r = raw_value(x);
  if (!r) return std::nullopt;
  return *r * Ey_.inv();
}

Fq EtaContext::eval_or_throw(const Divisor& x) const {
  auto v = eval(x);
  if (!v) throw EvaluationFailed("evaluation point meets the support of an auxiliary function");
  return *v;
}

Series EtaContext::eval_formal(const SeriesDivisor& x) const {
  auto r = raw_formal(x);
  if (!r || !r->den.is_unit()) throw EvaluationFailed("formal evaluation point meets the support of an auxiliary function");
  return r->num * (r->den * Ey_.lift_to(r->den.field())).inv();
}

std::optional<Fq> eta_eval(const Curve& C, const Cycle& cycle, const Divisor& y, const Divisor& x) {
  return EtaContext(C, cycle, y).eval(x);
}

std::vector<std::optional<Fq>> eta_batch(const EtaContext& ctx, const std::vector<Divisor>& xs) {
  std::vector<std::optional<Fq>> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(ctx.eval(x));
  return out;
}

std::optional<Fq> eta_eval_pointwise(const EtaContext& ctx, const Divisor& x, const Divisor* base) {
  const Curve& C = ctx.curve();
  auto value = [&](const Divisor& D) -> std::optional<Fq> {
    if (D.u.degree() != C.g || !is_simple(D)) return std::nullopt;
    const FieldCtx* L = nullptr;
    std::vector<Point> pts = mumford_decompose(C, D, &L);
    for (const auto& t : ctx.terms()) L = common_field(L, divisor_field(t.D.A, C.K));
    for (auto& P : pts) P = {false, P.x.lift_to(L), P.y.lift_to(L)};
    Fq acc(L, 1);
    // zero classes dropped by normalisation carry the basis 1, x, ..., x^(g-1)
    Matrix V(C.g, Vector(C.g));
    for (int k = 0; k < C.g; ++k)
      for (int j = 0; j < C.g; ++j) V[k][j] = pts[j].x.pow(static_cast<uint64_t>(k));
    int64_t deg = 0;
    for (const auto& t : ctx.terms()) deg += t.e;
    const Fq vd = det(V);
    acc = deg > 0 ? vd.inv().pow(static_cast<uint64_t>(deg)) : vd.pow(static_cast<uint64_t>(-deg));
    for (const auto& P : pts) {
      auto hv = eval_at_point(ctx.h(), P);
      if (!hv) return std::nullopt;
      acc = acc * *hv;
    }
    for (const auto& t : ctx.terms()) {
      Matrix M(C.g, Vector(C.g));
      for (int k = 0; k < C.g; ++k)
        for (int j = 0; j < C.g; ++j) {
          PlaneFunction f{t.basis.ab[k].first, t.basis.ab[k].second, t.D.A.u};
          auto v = eval_at_point(f, pts[j]);
          if (!v) return std::nullopt;
          M[k][j] = *v;
        }
      Fq d = det(M);
      if (d.is_zero()) return std::nullopt;
      acc = acc * (t.e < 0 ? d.inv() : d).pow(static_cast<uint64_t>(t.e < 0 ? -t.e : t.e));
    }
    return acc;
  };
  auto vx = value(x), vy = value(base ? *base : ctx.base());
  if (!vx || !vy) return std::nullopt;
  return *vx * vy->inv();
}

Poly<Series> series_poly(const PolyF& p, int prec, const FieldCtx* F) {
  return p.map([&](const Fq& a) { return Series::constant(a.lift_to(F), prec); });
}

SeriesDivisor constant_series_divisor(const Divisor& D, int prec, const FieldCtx* F) {
  return {series_poly(D.u, prec, F), series_poly(D.v, prec, F)};
}

std::optional<SeriesDivisor> deform_divisor(const Curve& C, const Divisor& D, int prec, const FieldCtx** Lout) {
  const FieldCtx* L = nullptr;
  std::vector<Point> pts = mumford_decompose(C, D, &L);
  if (Lout) *Lout = L;
  const PolyF f = poly_lift(C.f, L);
  std::vector<Series> xs, ys;
  for (size_t j = 0; j < pts.size(); ++j) {
    if (pts[j].y.is_zero()) return std::nullopt;
    for (size_t k = 0; k < j; ++k)
      if (pts[k].x == pts[j].x) return std::nullopt;
    Series s = Series::linear(pts[j].x.lift_to(L), Fq(L, static_cast<int64_t>(j + 1)), prec);
    xs.push_back(s);
    ys.push_back(f.eval(s).sqrt(pts[j].y.lift_to(L)));
  }
  Series one = Series::constant(Fq(L, 1), prec);
  Poly<Series> X = Poly<Series>::x(one);
  Poly<Series> u = Poly<Series>::constant(one), v;
  for (size_t j = 0; j < xs.size(); ++j) {
    u = u * (X - Poly<Series>::constant(xs[j]));
    Poly<Series> basis = Poly<Series>::constant(ys[j]);
    for (size_t k = 0; k < xs.size(); ++k) {
      if (k == j) continue;
      basis = basis * (X - Poly<Series>::constant(xs[k])) * Poly<Series>::constant((xs[j] - xs[k]).inv());
    }
    v = v + basis;
  }
  return SeriesDivisor{u, v};
}

int series_divisor_prec(const SeriesDivisor& D) {
  int prec = D.u.lead().prec();
  for (int i = 0; i <= D.u.degree(); ++i) prec = std::min(prec, D.u[i].prec());
  for (int i = 0; i <= D.v.degree(); ++i) prec = std::min(prec, D.v[i].prec());
  return prec;
}

const FieldCtx* series_divisor_field(const SeriesDivisor& D) { return D.u.lead().field(); }

SeriesDivisor lift_series_divisor(const SeriesDivisor& D, const FieldCtx* F) {
  auto lift = [F](const Series& s) { return s.lift_to(F); };
  return {D.u.map(lift), D.v.map(lift)};
}

SeriesDivisor series_add(const Curve& C, const SeriesDivisor& x, const SeriesDivisor& y) {
  const FieldCtx* F = common_field(common_field(series_divisor_field(x), series_divisor_field(y)), C.K);
  const int prec = std::min(series_divisor_prec(x), series_divisor_prec(y));
  Series one = Series::constant(Fq(F, 1), prec);
  return cantor_add_generic(lift_series_divisor(x, F), lift_series_divisor(y, F), series_poly(C.f, prec, F), C.g,
                            one);
}

SeriesDivisor series_sub(const Curve& C, const SeriesDivisor& x, const Divisor& w) {
  const FieldCtx* F = common_field(series_divisor_field(x), divisor_field(w, C.K));
  return series_add(C, x, constant_series_divisor(negate(w), series_divisor_prec(x), F));
}

SeriesDivisor series_scalar_mul(const Curve& C, int64_t n, const SeriesDivisor& x) {
  if (n < 0) return series_scalar_mul(C, -n, negate_generic(x));
  const FieldCtx* F = series_divisor_field(x);
  SeriesDivisor r = constant_series_divisor(zero_divisor(F), series_divisor_prec(x), F);
  for (int i = 62; i >= 0; --i) {
    if (!r.is_zero()) r = series_add(C, r, r);
    if ((n >> i) & 1) r = series_add(C, r, x);
  }
  return r;
}

Divisor series_divisor_at_zero(const SeriesDivisor& D) {
  return {D.u.map([](const Series& s) { return s[0]; }), D.v.map([](const Series& s) { return s[0]; })};
}

}  // namespace hyperiso
