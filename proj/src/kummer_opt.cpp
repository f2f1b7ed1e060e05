#include "hyperiso/kummer_opt.hpp"

#include "hyperiso/linalg.hpp"

namespace hyperiso {

namespace {

template <class R>
std::array<R, 6> coeffs_as(const std::array<Fq, 6>& c, const R& one) {
  std::array<R, 6> out;
  for (int i = 0; i < 6; ++i) out[i] = one * c[i];
  return out;
}

template <class R>
R quartic_generic(const std::array<R, 6>& c, const R& e1, const R& e2, const R& e3, const R& e4) {
  const R two = int_like(e1, 2), four = int_like(e1, 4);
  const R K2 = e2 * e2 - four * e1 * e3;
  const R K1 = -(two * (two * c[0] * e1 * e1 * e1 + c[1] * e1 * e1 * e2 + two * c[2] * e1 * e1 * e3 +
                        c[3] * e1 * e2 * e3 + two * c[4] * e1 * e3 * e3 + c[5] * e2 * e3 * e3));
  const R e1_2 = e1 * e1, e3_2 = e3 * e3;
  const R K0 = (c[1] * c[1] - four * c[0] * c[2]) * e1_2 * e1_2 - four * c[0] * c[3] * e1_2 * e1 * e2 -
               two * c[1] * c[3] * e1_2 * e1 * e3 - four * c[0] * c[4] * e1_2 * e2 * e2 +
               four * (c[0] * c[5] - c[1] * c[4]) * e1_2 * e2 * e3 +
               (c[3] * c[3] + two * c[1] * c[5] - four * c[2] * c[4]) * e1_2 * e3_2 -
               four * c[0] * c[5] * e1 * e2 * e2 * e2 - four * c[1] * c[5] * e1 * e2 * e2 * e3 -
               four * c[2] * c[5] * e1 * e2 * e3_2 - two * c[3] * c[5] * e1 * e3_2 * e3 + c[5] * c[5] * e3_2 * e3_2;
  return K2 * e4 * e4 + K1 * e4 + K0;
}

/// K1 and K0 at (1 : s : p : *).
template <class R>
std::pair<R, R> k1_k0(const std::array<R, 6>& c, const R& s, const R& p) {
  const R one = one_like(s), zero = zero_like(s);
  const R K0 = quartic_generic(c, one, s, p, zero);
  const R K1 = quartic_generic(c, one, s, p, one) - K0 - (s * s - int_like(s, 4) * p);
  return {K1, K0};
}

template <class R>
R f0_generic(const std::array<R, 6>& c, const R& s, const R& p) {
  const R two = int_like(s, 2);
  return two * c[0] + c[1] * s + two * c[2] * p + c[3] * s * p + two * c[4] * p * p + c[5] * s * p * p;
}

/// h mod (X^2 - sX + p) = h1 X + h0.
template <class R>
std::pair<R, R> h_mod_u(const std::array<R, 6>& c, const R& s, const R& p) {
  R a = zero_like(s), b = one_like(s), h1 = zero_like(s), h0 = zero_like(s);
  for (int k = 0; k < 6; ++k) {
    h1 = h1 + c[k] * a;
    h0 = h0 + c[k] * b;
    const R na = a * s + b, nb = -(a * p);
    a = na;
    b = nb;
  }
  return {h1, h0};
}

/// (q^2, qr, r^2) of v = qX + r from (s, p, beta).
template <class R>
std::array<R, 3> lift_squares(const std::array<R, 6>& c, const R& s, const R& p, const R& beta, const R& inv_disc) {
  const R two = int_like(s, 2), half = two.inv();
  const R disc = s * s - int_like(s, 4) * p;
  const R Y12 = (f0_generic(c, s, p) - beta * disc) * half;
  auto [h1, h0] = h_mod_u(c, s, p);
  const R A = -(two * (Y12 - h0 - s * h1 * half) * inv_disc);
  const R B = (h1 - A * s) * half;
  const R Cc = h0 + A * p;
  return {A, B, Cc};
}

bool is_zero_point(const ProjPoint& e) { return e[0].is_zero() && e[1].is_zero() && e[2].is_zero(); }

}  // namespace

KummerOpt::KummerOpt(const Curve& D) : D_(D) {
  if (D.g != 2 || D.f.degree() != 5) throw std::invalid_argument("KummerOpt needs a genus-2 quintic model");
  for (int i = 0; i < 6; ++i) c_[i] = D.f[i];
}

Fq KummerOpt::quartic(const ProjPoint& e) const {
  return quartic_generic(coeffs_as(c_, e[0].one()), e[0], e[1], e[2], e[3]);
}

Series KummerOpt::quartic(const SeriesPoint& e) const {
  return quartic_generic(coeffs_as(c_, e[0].one()), e[0], e[1], e[2], e[3]);
}

ProjPoint KummerOpt::embed(const Divisor& x) const {
  const FieldCtx* F = divisor_field(x, D_.K);
  const Fq one(F, 1), zero(F, 0);
  const auto c = coeffs_as(c_, one);
  if (x.u.degree() == 0) return {zero, zero, zero, one};
  if (x.u.degree() == 1) {
    const Fq x1 = -x.u[0];
    return {zero, one, x1, c[5] * x1 * x1};
  }
  const Fq s = -x.u[1], p = x.u[0], q = x.v.coeff(1, zero), r = x.v.coeff(0, zero);
  const Fq disc = s * s - Fq(F, 4) * p;
  if (!disc.is_zero()) {
    const Fq num = f0_generic(c, s, p) - Fq(F, 2) * (q * q * p + q * r * s + r * r);
    return {one, s, p, num / disc};
  }
  auto [K1, K0] = k1_k0(c, s, p);
  return {one, s, p, -K0 / K1};
}

SeriesPoint KummerOpt::embed(const SeriesDivisor& x) const {
  const FieldCtx* F = series_divisor_field(x);
  const int prec = series_divisor_prec(x);
  const Series one = Series::constant(Fq(F, 1), prec), zero = one.zero();
  const auto c = coeffs_as(c_, one);
  if (x.u.degree() == 0) return {zero, zero, zero, one};
  if (x.u.degree() == 1) {
    const Series x1 = -x.u[0];
    return {zero, one, x1, c[5] * x1 * x1};
  }
  const Series s = -x.u[1], p = x.u[0], q = x.v.coeff(1, zero), r = x.v.coeff(0, zero);
  const Series disc = s * s - int_like(s, 4) * p;
  if (disc.is_zero()) {
    auto [K1, K0] = k1_k0(c, s, p);
    return {one, s, p, -K0.div_exact(K1)};
  }
  const Series num = f0_generic(c, s, p) - int_like(s, 2) * (q * q * p + q * r * s + r * r);
  return {one, s, p, disc.is_unit() ? num / disc : num.div_exact(disc)};
}

Divisor KummerOpt::lift(const ProjPoint& e0) const {
  if (e0.size() != 4) throw std::invalid_argument("lift: expected a point of P^3");
  if (!quartic(e0).is_zero()) throw NotOnSurface("point is not on the Kummer quartic");
  const FieldCtx* F = e0[0].field();
  for (const auto& a : e0) F = common_field(F, a.field());
  const Fq one(F, 1), zero(F, 0);
  const auto c = coeffs_as(c_, one);
  if (is_zero_point(e0)) return zero_divisor(F);
  const PolyF h = D_.f.map([F](const Fq& a) { return a.lift_to(F); });
  if (e0[0].is_zero()) {
    const Fq x1 = e0[2] / e0[1];
    auto y = h.eval(x1).sqrt();
    if (!y) throw NonResidue("lift needs a quadratic extension");
    return {PolyF::linear_root(x1), PolyF::constant(*y)};
  }
  const Fq s = e0[1] / e0[0], p = e0[2] / e0[0], beta = e0[3] / e0[0];
  const PolyF u({p, -s, one});
  const Fq disc = s * s - Fq(F, 4) * p;
  if (disc.is_zero()) {
    const Fq x = s * Fq(F, 2).inv();
    auto y = h.eval(x).sqrt();
    if (!y) throw NonResidue("lift needs a quadratic extension");
    if (y->is_zero()) throw LiftFailure("double Weierstrass point");
    const Fq q = h.derivative().eval(x) / (Fq(F, 2) * *y);
    return {u, PolyF({*y - q * x, q})};
  }
  auto [A, B, Cc] = lift_squares(c, s, p, beta, disc.inv());
  Fq q = zero, r = zero;
  if (!A.is_zero()) {
    auto sq = A.sqrt();
    if (!sq) throw NonResidue("lift needs a quadratic extension");
    q = *sq;
    r = B / q;
  } else {
    auto sq = Cc.sqrt();
    if (!sq) throw NonResidue("lift needs a quadratic extension");
    r = *sq;
  }
  return {u, PolyF({r, q})};
}

SeriesDivisor KummerOpt::lift(const SeriesPoint& e) const {
  if (e.size() != 4) throw std::invalid_argument("lift: expected a point of P^3");
  if (!e[0].is_unit()) throw LiftFailure("first coordinate is not a unit");
  const Series inv0 = e[0].inv();
  const Series s = e[1] * inv0, p = e[2] * inv0, beta = e[3] * inv0;
  if (!quartic({s.one(), s, p, beta}).is_zero()) throw NotOnSurface("series point is not on the Kummer quartic");
  const Series disc = s * s - int_like(s, 4) * p;
  const auto c = coeffs_as(c_, s.one());
  if (disc.is_zero()) {
    const Poly<Series> h = series_poly(D_.f, s.prec(), s.field());
    const Series x = s * int_like(s, 2).inv();
    const Series h0 = h.eval(x);
    if (!h0.is_unit()) throw LiftFailure("double Weierstrass point");
    const Series y = h0.sqrt();
    const Series q = h.derivative().eval(x) / (int_like(s, 2) * y);
    return {Poly<Series>({p, -s, s.one()}), Poly<Series>({y - q * x, q})};
  }
  if (!disc.is_unit()) throw LiftFailure("support points coincide at t = 0");
  auto [A, B, Cc] = lift_squares(c, s, p, beta, disc.inv());
  Series q, r;
  if (A.is_unit()) {
    q = A.sqrt();
    r = B / q;
  } else if (Cc.is_unit() && A.is_zero()) {
    q = A;
    r = Cc.sqrt();
  } else {
    throw LiftFailure("degenerate v at t = 0");
  }
  return {Poly<Series>({p, -s, s.one()}), Poly<Series>({r, q})};
}

std::vector<std::pair<TwoTorsionLabel, ProjPoint>> KummerOpt::two_torsion_nodes() const {
  std::vector<std::pair<TwoTorsionLabel, ProjPoint>> out;
  for (const auto& a : all_labels(2)) out.push_back({a, embed(label_divisor(D_, a))});
  return out;
}

SeriesDivisor KummerOpt::pseudo_diff_lift(const SeriesPoint& pA, const SeriesPoint& pB, const SeriesPoint& pAB) const {
  const SeriesDivisor A = lift(pA);
  const bool b_zero = pB[0].is_zero() && pB[1].is_zero() && pB[2].is_zero();
  if (b_zero) return A;
  const SeriesDivisor B = lift(pB);
  const SeriesDivisor plus = series_add(D_, A, B), minus = series_add(D_, A, negate_generic(B));
  const bool mp = proj_equal(embed(plus), pAB), mm = proj_equal(embed(minus), pAB);
  if (mp && mm) throw SignAmbiguity("both sign choices match");
  if (mp) return minus;
  if (mm) return plus;
  throw LiftFailure("no sign choice matches the sum");
}

SeriesPoint KummerOpt::pseudo_diff(const SeriesPoint& pA, const SeriesPoint& pB, const SeriesPoint& pAB) const {
  return embed(pseudo_diff_lift(pA, pB, pAB));
}

ProjPoint KummerOpt::pseudo_diff(const ProjPoint& pA, const ProjPoint& pB, const ProjPoint& pAB) const {
  const Divisor A = lift(pA);
  if (is_zero_point(pB)) return embed(A);
  const Divisor B = lift(pB);
  const Divisor plus = cantor_add(D_, A, B), minus = cantor_sub(D_, A, B);
  const bool mp = proj_equal(embed(plus), pAB), mm = proj_equal(embed(minus), pAB);
  if (mp && mm) throw SignAmbiguity("both sign choices match");
  if (mp) return embed(minus);
  if (mm) return embed(plus);
  throw LiftFailure("no sign choice matches the sum");
}

bool proj_equal(const ProjPoint& a, const ProjPoint& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j)
      if (a[i] * b[j] != a[j] * b[i]) return false;
  return true;
}

bool proj_equal(const SeriesPoint& a, const SeriesPoint& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j)
      if (!(a[i] * b[j] - a[j] * b[i]).is_zero()) return false;
  return true;
}

ProjPoint ChangeOfVariables::apply(const ProjPoint& z) const { return mat_vec(M, z); }

SeriesPoint ChangeOfVariables::apply(const SeriesPoint& z) const {
  SeriesPoint out;
  for (const auto& row : M) {
    Series acc = z[0].zero();
    for (size_t j = 0; j < row.size(); ++j) acc = acc + z[j] * row[j];
    out.push_back(acc);
  }
  return out;
}

ChangeOfVariables find_change_of_variables(const std::map<uint32_t, ProjPoint>& kd_nodes, const KummerOpt& opt,
                                           const std::vector<ProjPoint>& samples) {
  auto L = [](const char* s) { return TwoTorsionLabel::parse(2, s); };
  const TwoTorsionLabel a3 = L("a3"), a4 = L("a4"), a5 = L("a5");
  for (const char* s : {"a6", "a3", "a4", "a5", "a12", "a34", "a35"})
    if (!kd_nodes.count(L(s).mask)) throw std::invalid_argument(std::string("missing node ") + s);
  const auto nodes = opt.two_torsion_nodes();
  std::map<uint32_t, ProjPoint> target;
  for (const auto& [a, p] : nodes) target[a.mask] = p;
  const FieldCtx* F = nodes[0].second[0].field();
  const Fq one(F, 1), zero(F, 0);

  std::vector<TwoTorsionLabel> nonzero;
  for (const auto& [a, p] : nodes)
    if (!a.is_zero()) nonzero.push_back(a);

  auto node_label = [&](const ProjPoint& q) -> std::optional<TwoTorsionLabel> {
    for (const auto& [a, p] : nodes)
      if (proj_equal(p, q)) return a;
    return std::nullopt;
  };

  for (const auto& b3 : nonzero)
    for (const auto& b4 : nonzero)
      for (const auto& b5 : nonzero) {
        if (b3 == b4 || b3 == b5 || b4 == b5 || (b3 + b4) == b5) continue;
        const std::vector<std::pair<TwoTorsionLabel, TwoTorsionLabel>> corr = {
            {a3, b3}, {a4, b4}, {a5, b5}, {L("a12"), b3 + b4 + b5}, {L("a34"), b3 + b4}, {L("a35"), b3 + b5}};
        Matrix A;
        Vector rhs;
        auto unit_row = [&](int idx, const Fq& val) {
          Vector row(16, zero);
          row[idx] = one;
          A.push_back(row);
          rhs.push_back(val);
        };
        unit_row(3, zero);
        unit_row(7, zero);
        unit_row(11, zero);
        unit_row(15, one);
        for (const auto& [src, dst] : corr) {
          const ProjPoint& p = kd_nodes.at(src.mask);
          const ProjPoint& q = target.at(dst.mask);
          int piv = 3;
          while (q[piv].is_zero()) --piv;
          for (int i = 0; i < 4; ++i) {
            if (i == piv) continue;
            Vector row(16, zero);
            for (int j = 0; j < 4; ++j) {
              row[4 * i + j] = row[4 * i + j] + p[j].lift_to(F) * q[piv];
              row[4 * piv + j] = row[4 * piv + j] - p[j].lift_to(F) * q[i];
            }
            A.push_back(row);
            rhs.push_back(zero);
          }
        }
        auto sol = solve_any(A, rhs, 16, F);
        if (!sol || rank(A) < 16) continue;
        ChangeOfVariables cv;
        cv.M.assign(4, Vector(4, zero));
        for (int i = 0; i < 16; ++i) cv.M[i / 4][i % 4] = (*sol)[i];
        if (det(cv.M).is_zero()) continue;
        cv.assignment[L("a6").mask] = L("a6");
        for (const auto& [src, dst] : corr) cv.assignment[src.mask] = dst;
        bool ok = true;
        for (const char* s : {"a1", "a2"}) {
          auto it = kd_nodes.find(L(s).mask);
          if (it == kd_nodes.end()) continue;
          auto lab = node_label(cv.apply(it->second));
          if (!lab) {
            ok = false;
            break;
          }
          cv.assignment[L(s).mask] = *lab;
        }
        if (ok && cv.assignment.count(L("a1").mask) && cv.assignment.count(L("a2").mask))
          ok = cv.assignment[L("a1").mask] + cv.assignment[L("a2").mask] == cv.assignment[L("a12").mask];
        for (const auto& p : samples) ok = ok && opt.quartic(cv.apply(p)).is_zero();
        if (ok) return cv;
      }
  throw NoAssignment("no change of variables maps the nodes");
}

}  // namespace hyperiso
