#include "doctest.h"
#include "fixtures.hpp"
#include "hyperiso/isogeny.hpp"

using namespace hyperiso;
using namespace fixtures;

namespace {

Level2Family golden_family() {
  Curve C = golden_curve();
  EtafOptions o;
  o.phi_u = golden_phi_u();
  o.phi_y = golden_phi_y();
  return Level2Family(C, enumerate_kernel(C, {3, {golden_T1(), golden_T2()}}), golden_y(), o);
}

SeriesDivisor formal_point(const Curve& C, const Point& P, int prec) {
  Series u = Series::linear(P.x, Fq(C.K, 1), prec);
  Series v = series_poly(C.f, prec, C.K).eval(u).sqrt(P.y);
  return {Poly<Series>({-u, u.one()}), Poly<Series>({v})};
}

/// F(P) = (P - O) + w, whose pullback fixes every invariant differential.
FormalImage translation_image(const Curve& C, const Point& base, const Divisor& w, int prec) {
  FormalImage im;
  im.base = base;
  im.point = formal_point(C, base, prec);
  im.image = series_add(C, im.point, constant_series_divisor(w, prec, C.K));
  return im;
}

const Genus2Isogeny& golden_isogeny() {
  static const Genus2Isogeny iso = [] {
    Level2Family fam = golden_family();
    Rng rng(11);
    return compute_isogeny_g2(fam, 3, rng);
  }();
  return iso;
}

}  // namespace

TEST_CASE("polynomial parsing") {
  const FieldCtx* F = F1009();
  CHECK(parse_polynomial(F, "X^2 + 3X - 5") == poly_from_ints(F, {-5, 3, 1}));
  CHECK(parse_polynomial(F, "2*u^{3} - u + 1010") == poly_from_ints(F, {1, -1, 0, 2}));
  CHECK(parse_polynomial(F, "7") == poly_from_ints(F, {7}));
  CHECK_THROWS(parse_polynomial(F, "x^"));
  CHECK_THROWS(parse_polynomial(F, ""));
}

TEST_CASE("pullback of a translation is the identity") {
  Curve C = golden_curve();
  Rng rng(5);
  int done = 0;
  for (int attempt = 0; attempt < 10 && done < 3; ++attempt) {
    Point base = random_curve_point(C, C.K, rng);
    Divisor w = from_point(C, random_curve_point(C, C.K, rng));
    FormalImage im = translation_image(C, base, w, 5);
    FormalState st;
    try {
      st = decompose_image(C, C, im);
    } catch (const SpecialPoint&) {
      continue;
    }
    Matrix m = solve_pullback_matrix(st);
    CHECK(m == identity_matrix(C.K, 2));
    ++done;

    FormalState a = st, b = st;
    extend_precision(a, 15);
    for (int d = 6; d <= 15; ++d) extend_precision(b, d);
    for (int j = 0; j < 2; ++j) {
      CHECK(a.x[j] == b.x[j]);
      CHECK(a.y[j] == b.y[j]);
    }
    for (const auto& r : differential_residual(a)) CHECK(r.is_zero());
    FormalState c = a;
    extend_precision(c, 5);
    for (int j = 0; j < 2; ++j) CHECK(c.x[j] == st.x[j]);

    // Direct expansion of the translated point agrees with the extended solution.
    FormalImage wide = translation_image(C, base, w, 15);
    FormalState direct = decompose_image(C, C, wide);
    for (int j = 0; j < 2; ++j) {
      bool match = false;
      for (int k = 0; k < 2; ++k) match = match || direct.x[k] == a.x[j];
      CHECK(match);
    }
  }
  CHECK(done == 3);
}

TEST_CASE("pullback columns under a shift of the model of D") {
  Curve C = golden_curve();
  Rng rng(9);
  const Fq c(C.K, 17);
  // D': Y^2 = h(X + c), and F'(P) = F(P) moved by X -> X - c: x'_j = x_j - c.
  Curve Ds(C.K, C.f.compose(PolyF({c, Fq(C.K, 1)})));
  for (int attempt = 0; attempt < 10; ++attempt) {
    Point base = random_curve_point(C, C.K, rng);
    FormalImage im = translation_image(C, base, from_point(C, random_curve_point(C, C.K, rng)), 5);
    FormalState st;
    try {
      st = decompose_image(C, C, im);
    } catch (const SpecialPoint&) {
      continue;
    }
    FormalState sh = st;
    sh.hD = Ds.f;
    for (auto& x : sh.x) x = x - c.lift_to(sh.L);
    Matrix m = solve_pullback_matrix(sh);
    // x^0 dx/y keeps its pullback; x dx/y picks up -c times it.
    CHECK(m[0][0] == Fq(C.K, 1));
    CHECK(m[1][0].is_zero());
    CHECK(m[0][1] == -c);
    CHECK(m[1][1] == Fq(C.K, 1));
    break;
  }
}

TEST_CASE("genus-2 isogeny fractions over F_1009") {
  const Genus2Isogeny& iso = golden_isogeny();
  CHECK(iso.formal.evaluations == 9);
  CHECK(iso.D.f == product_of_linears({Fq(F1009(), 0), Fq(F1009(), 62), Fq(F1009(), 705), Fq(F1009(), 140),
                                       Fq(F1009(), 37)},
                                      F1009()));
  REQUIRE(iso.fractions.parts.size() == 4u);
  const auto bounds = degree_bounds_g2(3);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(iso.fractions.parts[i].first.degree() <= bounds[i]);
    CHECK(iso.fractions.parts[i].second.degree() <= bounds[i]);
  }
  Rng rng(3);
  VerifyReport rep = verify_isogeny(golden_curve(), iso.D, iso.fractions, {golden_T1(), golden_T2()}, 30, rng);
  CHECK(rep.validity_ok >= 20);
  CHECK(rep.validity_fail == 0);
  CHECK(rep.homomorphism_ok >= 20);
  CHECK(rep.homomorphism_fail == 0);
  CHECK(rep.kernel_ok == 2);
  CHECK(rep.passed());

  IsogenyFractions bad = iso.fractions;
  auto c = bad.parts[1].first.coeffs();
  c[0] = c[0] + Fq(F1009(), 1);
  bad.parts[1].first = PolyF(c);
  Rng rng2(4);
  VerifyReport neg = verify_isogeny(golden_curve(), iso.D, bad, {golden_T1(), golden_T2()}, 50, rng2);
  CHECK(neg.validity_fail > 0);
  CHECK_FALSE(neg.passed());
}

TEST_CASE("formal image does not depend on m") {
  const Genus2Isogeny& iso = golden_isogeny();
  Level2Family fam = golden_family();
  std::map<uint32_t, ProjPoint> kd;
  for (const auto& n : iso.recovery.nodes.nodes) kd[n.label.mask] = n.p;
  for (const auto& n : iso.recovery.nodes.extra) kd[n.label.mask] = n.p;
  KummerOpt K(iso.D);
  auto L = [](const char* s) { return TwoTorsionLabel::parse(2, s); };
  const std::vector<TwoTorsionLabel> basis = {L("a6"), L("a1"), L("a2"), L("a12")};
  const Point base = iso.formal.base;
  FormalImage i2 = formal_image(fam, basis, iso.cv, K, base, 6, 2);
  FormalImage i3 = formal_image(fam, basis, iso.cv, K, base, 6, 3);
  CHECK(i2.evaluations == 9);
  const int prec = std::min(series_divisor_prec(i2.image), series_divisor_prec(i3.image));
  REQUIRE(prec >= 4);
  auto trunc = [prec](const SeriesDivisor& d) {
    auto tr = [prec](const Series& s) { return s.truncate(prec); };
    return SeriesDivisor{d.u.map(tr), d.v.map(tr)};
  };
  const SeriesDivisor a = trunc(i2.image), b = trunc(i3.image);
  CHECK((a == b || a == negate_generic(b)));
  CHECK(is_valid(iso.D, series_divisor_at_zero(a)));
}

TEST_CASE("genus-3 fractions over F_120049") {
  const FieldCtx* F = F120049();
  Curve C = g3_curve_C(), D = g3_curve_D();
  std::vector<Divisor> T = g3_kernel();
  for (const auto& t : T) CHECK(is_valid(C, t));
  IsogenyFractions fr = g3_fractions(F);
  CHECK(fr.parts[0].second == fr.parts[1].second);
  CHECK(fr.parts[0].second == parse_polynomial(F, g3_den8));
  Rng rng(7);
  VerifyReport rep = verify_isogeny(C, D, fr, T, 10, rng);
  CHECK(rep.validity_fail == 0);
  CHECK(rep.validity_ok >= 8);
  CHECK(rep.homomorphism_fail == 0);
  CHECK(rep.homomorphism_ok >= 8);
  CHECK(rep.kernel_ok == 3);
  CHECK(rep.passed());
}
