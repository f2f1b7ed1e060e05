#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "hyperiso/curve_recovery.hpp"

using namespace hyperiso;
using namespace fixtures;

namespace {

P1Value v(int64_t x) { return Fq(F1009(), x); }
const P1Value inf = std::nullopt;

ProjPoint proj(std::vector<int64_t> c) {
  ProjPoint p;
  for (auto x : c) p.push_back(Fq(F1009(), x));
  return p;
}

std::vector<ProjPoint> golden_nodes() {
  return {proj({0, 0, 1, 0}),     proj({0, 1, 0, 0}),     proj({0, 947, 689, 1}),
          proj({0, 304, 71, 1}), proj({0, 869, 468, 1}), proj({0, 0, 0, 1})};
}

Trope z1() { return {TwoTorsionLabel::parse(2, "a6"), proj({1, 0, 0, 0})}; }

Curve from_roots(const FieldCtx* F, std::vector<int64_t> rs, int64_t lc = 1) {
  std::vector<Fq> r;
  for (auto x : rs) r.push_back(Fq(F, x));
  return Curve(F, product_of_linears(r, F).scale(Fq(F, lc)));
}

}  // namespace

TEST_CASE("parameterization of the fixed trope") {
  const auto nodes = golden_nodes();
  auto a = parameterize_trope(z1(), nodes, 5);
  auto b = parameterize_trope(z1(), nodes, 0);
  CHECK(a == std::vector<P1Value>{v(0), inf, v(498), v(351), v(397)});
  CHECK(b == std::vector<P1Value>{inf, v(62), v(705), v(140), v(0)});

  std::vector<ProjPoint> perm = {nodes[3], nodes[5], nodes[1], nodes[0], nodes[4], nodes[2]};
  CHECK(parameterize_trope(z1(), perm, 1) == std::vector<P1Value>{v(351), inf, v(0), v(397), v(498)});
  std::vector<ProjPoint> bad = nodes;
  bad[2][0] = Fq(F1009(), 1);
  CHECK_THROWS_AS(parameterize_trope(z1(), bad, 5), DegenerateConic);
}

TEST_CASE("gluing the two models") {
  const std::vector<P1Value> a = {v(0), inf, v(498), v(351), v(397)}, b = {inf, v(62), v(705), v(140), v(0)};
  GlueResult g = glue_models(a, b);
  CHECK(g.unmatched == 0u);
  CHECK(g.values.back() == v(37));
  CHECK(g.map(v(498)) == v(62));
  CHECK(g.map(v(351)) == v(705));
  CHECK(g.map(v(397)) == v(140));
  CHECK(g.map(inf) == inf);
  CHECK(g.map(v(837)) == v(0));
  Mobius expected{Fq(F1009(), 229), Fq(F1009(), 37), Fq(F1009(), 0), Fq(F1009(), 1)};
  for (int64_t x : {0, 5, 498, 837}) CHECK(g.map(v(x)) == expected(v(x)));

  Curve D = curve_from_values(g.values, F1009());
  CHECK(D.f == from_roots(F1009(), {0, 62, 705, 140, 37}).f);
  Curve D2 = curve_from_values({v(0), inf, v(498), v(351), v(397), v(837)}, F1009());
  Curve D2s(F1009(), D2.f.scale(Fq(F1009(), 11)));
  CHECK(igusa_equivalent(igusa_clebsch(D), igusa_clebsch(D2s)));
  CHECK(hyperelliptic_isomorphic(D, D2s));

  CHECK_THROWS_AS(glue_models(a, {inf, v(1), v(2), v(3), v(4)}), NoConsistentMap);
  CHECK_THROWS_AS(curve_from_values({v(1), v(1), v(2), v(3), v(4), inf}, F1009()), DuplicateRoot);
  CHECK(curve_from_values({v(1), v(2), v(3), v(4), v(5), v(6)}, F1009()).f.degree() == 5);
}

TEST_CASE("isomorphism invariants") {
  Rng rng(3);
  const FieldCtx* F = F1009();
  for (int i = 0; i < 5; ++i) {
    std::vector<P1Value> bp = {inf};
    while (bp.size() < 6) {
      P1Value r = random_element(F, rng);
      if (std::find(bp.begin(), bp.end(), r) == bp.end()) bp.push_back(r);
    }
    Curve C = curve_from_values(bp, F);
    Mobius m{random_element(F, rng), random_element(F, rng), random_element(F, rng), random_element(F, rng)};
    if ((m.a * m.d - m.b * m.c).is_zero()) continue;
    std::vector<P1Value> moved;
    for (const auto& x : bp) moved.push_back(m(x));
    Curve C2 = curve_from_values(moved, F);
    CHECK(igusa_equivalent(igusa_clebsch(C), igusa_clebsch(C2)));
    CHECK(hyperelliptic_isomorphic(C, C2));
    Curve other = random_curve(F, 2, rng);
    CHECK_FALSE(igusa_equivalent(igusa_clebsch(C), igusa_clebsch(other)));
    CHECK_FALSE(hyperelliptic_isomorphic(C, other));
  }
  Curve C = golden_curve();
  Curve T = quadratic_twist(C);
  CHECK(igusa_equivalent(igusa_clebsch(C), igusa_clebsch(T)));
  CHECK(jacobian_order_naive(C) != jacobian_order_naive(T));
  CHECK(resolve_twist(C, jacobian_order_naive(C)).f == C.f);
  CHECK(resolve_twist(T, jacobian_order_naive(C)).f == quadratic_twist(T).f);
  CHECK_THROWS_AS(resolve_twist(C, jacobian_order_naive(C) + 1), Unresolvable);
}

TEST_CASE("recovery of the isogenous curve on the F_1009 example") {
  Curve C = golden_curve();
  EtafOptions o;
  o.phi_u = golden_phi_u();
  o.phi_y = golden_phi_y();
  Level2Family fam(C, enumerate_kernel(C, {3, {golden_T1(), golden_T2()}}), golden_y(), o);
  Rng rng(11);
  Genus2Recovery r = recover_genus2(fam, rng);
  CHECK(r.params_a6 == std::vector<P1Value>{v(0), inf, v(498), v(351), v(397)});
  CHECK(r.params_a1 == std::vector<P1Value>{inf, v(62), v(705), v(140), v(0)});
  const Curve expected = from_roots(F1009(), {0, 62, 705, 140, 37});
  CHECK(r.D.f == expected.f);
  const mpz_class nC = jacobian_order_naive(C);
  CHECK(jacobian_order_naive(expected) == nC);
  CHECK(resolve_twist(r.D, nC).f == expected.f);
}
