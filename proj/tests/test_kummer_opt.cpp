#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "hyperiso/curve_recovery.hpp"
#include "hyperiso/kummer_opt.hpp"

using namespace hyperiso;
using namespace fixtures;

namespace {

Curve golden_D() {
  const FieldCtx* F = F1009();
  return Curve(F, product_of_linears({Fq(F, 0), Fq(F, 62), Fq(F, 705), Fq(F, 140), Fq(F, 37)}, F));
}

SeriesDivisor formal_point(const Curve& C, const Point& P, int prec) {
  const FieldCtx* F = C.K;
  Series u = Series::linear(P.x, Fq(F, 1), prec);
  Series h = series_poly(C.f, prec, F).eval(u);
  Series v = h.sqrt(P.y);
  return {Poly<Series>({-u, u.one()}), Poly<Series>({v})};
}

}  // namespace

TEST_CASE("Kummer quartic and embedding") {
  Curve D = golden_D();
  KummerOpt K(D);
  Rng rng(21);
  const FieldCtx* F = D.K;
  CHECK(K.embed(zero_divisor(F)) == ProjPoint{Fq(F, 0), Fq(F, 0), Fq(F, 0), Fq(F, 1)});
  Point P = random_curve_point(D, F, rng);
  Divisor w1 = from_point(D, P);
  CHECK(K.embed(w1) == ProjPoint{Fq(F, 0), Fq(F, 1), P.x, P.x * P.x});
  CHECK(K.quartic(K.embed(w1)).is_zero());

  int lifted = 0;
  for (int i = 0; i < 500; ++i) {
    Divisor x = random_jacobian_point(D, rng);
    ProjPoint e = K.embed(x);
    REQUIRE(K.quartic(e).is_zero());
    if (i < 100) {
      CHECK(e == K.embed(negate(x)));
      Divisor l = K.lift(e);
      CHECK((l == x || l == negate(x)));
      ++lifted;
    }
  }
  CHECK(lifted == 100);
  CHECK(K.lift(K.embed(zero_divisor(F))).is_zero());
  Divisor lw = K.lift(K.embed(w1));
  CHECK((lw == w1 || lw == negate(w1)));
  ProjPoint off = K.embed(random_jacobian_point(D, rng));
  off[3] = off[3] + Fq(F, 1);
  CHECK_THROWS_AS(K.lift(off), NotOnSurface);
}

TEST_CASE("equal-x embedding matches the limit along the curve") {
  Curve D = golden_D();
  KummerOpt K(D);
  Rng rng(8);
  for (int i = 0; i < 5; ++i) {
    Point P = random_curve_point(D, D.K, rng);
    Divisor dbl = cantor_add(D, from_point(D, P), from_point(D, P));
    REQUIRE(dbl.u.degree() == 2);
    ProjPoint e = K.embed(dbl);
    CHECK(K.quartic(e).is_zero());
    const int prec = 6;
    SeriesDivisor moving = formal_point(D, P, prec);
    const Series x0 = Series::constant(P.x, prec), y0 = Series::constant(P.y, prec);
    const Series xt = -moving.u[0], yt = moving.v[0];
    const Series slope = (yt - y0).div_exact(xt - x0);
    SeriesDivisor pair{Poly<Series>({xt * x0, -(xt + x0), xt.one()}), Poly<Series>({y0 - slope * x0, slope})};
    SeriesPoint s = K.embed(pair);
    for (int k = 0; k < 4; ++k) CHECK(s[k][0] == e[k] / e[0]);
    Divisor l = K.lift(e);
    CHECK((l == dbl || l == negate(dbl)));
  }
}

TEST_CASE("two-torsion nodes of the Kummer model") {
  Curve D = golden_D();
  KummerOpt K(D);
  auto nodes = K.two_torsion_nodes();
  REQUIRE(nodes.size() == 16u);
  for (size_t i = 0; i < nodes.size(); ++i) {
    CHECK(K.quartic(nodes[i].second).is_zero());
    for (size_t j = i + 1; j < nodes.size(); ++j) CHECK_FALSE(proj_equal(nodes[i].second, nodes[j].second));
  }
  // Tropes of this model: the plane e1 = 0 carries exactly the nodes of the classes r_i - o and 0.
  std::set<uint32_t> on;
  for (const auto& [a, p] : nodes)
    if (p[0].is_zero()) on.insert(a.mask);
  std::set<uint32_t> expected;
  for (const auto& a : all_labels(2))
    if (trope_contains(TwoTorsionLabel::parse(2, "a6"), a)) expected.insert(a.mask);
  CHECK(on == expected);
}

TEST_CASE("pseudo-difference") {
  Curve D = golden_D();
  KummerOpt K(D);
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    Divisor x = random_jacobian_point(D, rng), y = random_jacobian_point(D, rng);
    ProjPoint d = K.pseudo_diff(K.embed(x), K.embed(y), K.embed(cantor_add(D, x, y)));
    CHECK(proj_equal(d, K.embed(cantor_sub(D, x, y))));
  }
  Divisor x = random_jacobian_point(D, rng);
  CHECK(proj_equal(K.pseudo_diff(K.embed(scalar_mul(D, 2, x)), K.embed(x), K.embed(scalar_mul(D, 3, x))), K.embed(x)));
  CHECK(proj_equal(K.pseudo_diff(K.embed(x), K.embed(zero_divisor(D.K)), K.embed(x)), K.embed(x)));

  const int prec = 5;
  Point P = random_curve_point(D, D.K, rng);
  SeriesDivisor Pt = formal_point(D, P, prec);
  SeriesDivisor m2 = series_scalar_mul(D, 2, Pt), m3 = series_scalar_mul(D, 3, Pt), m5 = series_scalar_mul(D, 5, Pt);
  SeriesDivisor r = K.pseudo_diff_lift(K.embed(m3), K.embed(m2), K.embed(m5));
  CHECK((r == Pt || r == negate_generic(Pt)));
  Divisor r0 = series_divisor_at_zero(r);
  Divisor base = K.lift(K.pseudo_diff(K.embed(series_divisor_at_zero(m3)), K.embed(series_divisor_at_zero(m2)),
                                      K.embed(series_divisor_at_zero(m5))));
  CHECK((r0 == base || r0 == negate(base)));
}

TEST_CASE("change of variables to the Kummer model") {
  SUBCASE("identity when the nodes are the model's own") {
    Curve D = golden_D();
    KummerOpt K(D);
    std::map<uint32_t, ProjPoint> kd;
    for (const auto& [a, p] : K.two_torsion_nodes()) kd[a.mask] = p;
    ChangeOfVariables cv = find_change_of_variables(kd, K);
    for (const auto& [a, p] : K.two_torsion_nodes()) CHECK(proj_equal(cv.apply(p), p));
    Rng rng(2);
    for (int i = 0; i < 10; ++i) CHECK(K.quartic(cv.apply(K.embed(random_jacobian_point(D, rng)))).is_zero());
  }

  SUBCASE("F_1009 example") {
    Curve C = golden_curve();
    EtafOptions o;
    o.phi_u = golden_phi_u();
    o.phi_y = golden_phi_y();
    Level2Family fam(C, enumerate_kernel(C, {3, {golden_T1(), golden_T2()}}), golden_y(), o);
    Rng rng(11);
    Genus2Recovery rec = recover_genus2(fam, rng, true);
    CHECK(rec.nodes.evaluations == 13);
    REQUIRE(rec.nodes.extra.size() == 3u);
    std::map<uint32_t, ProjPoint> kd;
    for (const auto& n : rec.nodes.nodes) kd[n.label.mask] = n.p;
    for (const auto& n : rec.nodes.extra) kd[n.label.mask] = n.p;
    KummerOpt K(rec.D);
    ChangeOfVariables cv = find_change_of_variables(kd, K);
    for (const auto& [mask, p] : kd) {
      const ProjPoint q = cv.apply(p);
      bool hit = false;
      for (const auto& [b, n] : K.two_torsion_nodes()) hit = hit || proj_equal(q, n);
      CHECK(hit);
    }
    const std::vector<TwoTorsionLabel> basis = {TwoTorsionLabel::parse(2, "a6"), TwoTorsionLabel::parse(2, "a1"),
                                                TwoTorsionLabel::parse(2, "a2"), TwoTorsionLabel::parse(2, "a12")};
    int checked = 0;
    for (int i = 0; i < 8; ++i) {
      auto p = kummer_image(fam, basis, random_jacobian_point(C, rng));
      if (!p) continue;
      CHECK(K.quartic(cv.apply(*p)).is_zero());
      ++checked;
    }
    CHECK(checked >= 6);
  }
}
