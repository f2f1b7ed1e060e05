#include "doctest.h"
#include "fixtures.hpp"
#include "hyperiso/kernel_etaf.hpp"

using namespace hyperiso;
using namespace fixtures;

namespace {

KernelData golden_kernel(const Curve& C) { return enumerate_kernel(C, {3, {golden_T1(), golden_T2()}}); }

EtafOptions golden_options(KernelMode mode = KernelMode::Orbit) {
  EtafOptions o;
  o.mode = mode;
  o.phi_u = golden_phi_u();
  o.phi_y = golden_phi_y();
  return o;
}

Divisor a_i(const Curve& C, int i) {
  static const int64_t r[] = {179, 237, 325, 344, 673};
  return {PolyF::linear_root(Fq(C.K, r[i - 1])), PolyF()};
}

/// Quadratic twist y^2 = prod (x - r_i/d) and the F_{p^2} isomorphism (x, y) -> (x/d, y sqrt(d)/d^3).
struct Twist {
  Curve C;
  const FieldCtx* L;
  Fq d, s;
  Divisor map(const Divisor& D) const {
    Divisor Dl = lift_divisor(D, L);
    const int k = Dl.u.degree();
    PolyF dx = PolyF::monomial(d.lift_to(L), 1);
    PolyF u = Dl.u.compose(dx).scale(d.lift_to(L).pow(static_cast<uint64_t>(k)).inv());
    PolyF v = Dl.v.compose(dx).scale(s * d.lift_to(L).pow(3ULL).inv());
    return {u, v};
  }
};

Twist golden_twist() {
  const FieldCtx* F = F1009();
  Fq d(F, 11);
  while (d.is_square()) d = d + Fq(F, 1);
  std::vector<Fq> rs;
  for (int64_t r : {179, 237, 325, 344, 673}) rs.push_back(Fq(F, r) * d.inv());
  const FieldCtx* L = extension_of_degree(F, 2);
  return {Curve(F, product_of_linears(rs, F)), L, d, d.lift_to(L).sqrt().value()};
}

}  // namespace

TEST_CASE("kernel enumeration") {
  Curve C = golden_curve();
  KernelData V = golden_kernel(C);
  CHECK(V.elements.size() == 9u);
  CHECK(V.orbits.size() == 9u);
  CHECK(V.elements[0].is_zero());
  CHECK_THROWS_AS(enumerate_kernel(C, {3, {golden_T1()}}), InvalidKernel);
  CHECK_THROWS_AS(enumerate_kernel(C, {3, {golden_T1(), golden_y()}}), InvalidKernel);

  Twist T = golden_twist();
  KernelData Vt = enumerate_kernel(T.C, {3, {T.map(golden_T1()), T.map(golden_T2())}});
  CHECK(Vt.M == T.L);
  CHECK(Vt.orbits.size() == 5u);
  for (const auto& o : Vt.orbits) CHECK(o.size == (o.rep == 0 ? 1 : 2));
}

TEST_CASE("eta_f on the golden kernel") {
  Curve C = golden_curve();
  KernelData V = golden_kernel(C);
  const Divisor y = golden_y();
  Rng rng(99);
  EtafContext ctx(C, V, level2_cycle(C, a_i(C, 1)), y, golden_options());
  EtafContext enum_ctx(C, V, level2_cycle(C, a_i(C, 1)), y, golden_options(KernelMode::Enumerate));
  CHECK(ctx.eval(y) == Fq(C.K, 1));

  SUBCASE("constant for the trivial cycle") {
    EtafContext triv(C, V, level2_cycle(C, zero_divisor(C.K)), y, golden_options());
    for (int i = 0; i < 5; ++i) CHECK(triv.eval(random_jacobian_point(C, rng)) == Fq(C.K, 1));
  }

  SUBCASE("invariant under translation by the kernel") {
    int checked = 0;
    for (int i = 0; i < 20; ++i) {
      Divisor x = random_jacobian_point(C, rng);
      auto v = ctx.eval(x);
      if (!v) continue;
      for (const auto& w : V.elements) {
        auto vw = ctx.eval(cantor_add(C, x, w));
        if (vw) CHECK(*vw == *v);
      }
      ++checked;
    }
    CHECK(checked >= 18);
  }

  SUBCASE("orbit and enumeration modes agree") {
    for (int i = 0; i < 20; ++i) {
      Divisor x = random_jacobian_point(C, rng);
      auto a = ctx.phi_V(x), b = enum_ctx.phi_V(x);
      if (a && b) CHECK(*a == *b);
    }
    std::vector<Divisor> xs;
    for (int i = 0; i < 50; ++i) xs.push_back(random_jacobian_point(C, rng));
    auto r1 = etaf_batch(ctx, xs), r2 = etaf_batch(enum_ctx, xs);
    for (size_t i = 0; i < xs.size(); ++i)
      if (r1[i] && r2[i]) CHECK(*r1[i] == *r2[i]);
    CHECK(etaf_batch(ctx, {xs[0]})[0] == ctx.eval(xs[0]));
  }

  SUBCASE("multiplicativity") {
    EtafContext b(C, V, level2_cycle(C, a_i(C, 2)), y, golden_options());
    Cycle both = level2_cycle(C, a_i(C, 1));
    for (auto& t : level2_cycle(C, a_i(C, 2)).terms) both.terms.push_back(t);
    EtafContext ab(C, V, both, y, golden_options());
    for (int i = 0; i < 10; ++i) {
      Divisor x = random_jacobian_point(C, rng);
      auto l = ab.eval(x), r1 = ctx.eval(x), r2 = b.eval(x);
      if (l && r1 && r2) CHECK(*l == *r1 * *r2);
    }
  }

  SUBCASE("eta call budget") {
    const uint64_t before = ctx.eta_calls();
    (void)ctx.eval(random_jacobian_point(C, rng));
    const uint64_t used = ctx.eta_calls() - before;
    const uint64_t I = ctx.terms().size();
    CHECK(used <= 1 + 4 * I * 9);
    CHECK(used > 0);
  }

  SUBCASE("trivial kernel reduces Phi_V to tau") {
    KernelData triv;
    triv.ell = 3;
    triv.M = C.K;
    triv.elements = {zero_divisor(C.K)};
    triv.orbits = {{0, 1}};
    EtafContext t(C, triv, level2_cycle(C, a_i(C, 1)), y, golden_options());
    Cycle tc;
    tc.add(scalar_mul(C, 2, golden_phi_u()), 1).add(negate(golden_phi_u()), 2).add(zero_divisor(C.K), -3);
    EtaContext tau(C, tc, golden_phi_y());
    for (int i = 0; i < 5; ++i) {
      Divisor x = random_jacobian_point(C, rng);
      auto a = t.phi_V(x), b = tau.eval(x);
      if (a && b) CHECK(*a == *b);
    }
  }
}

TEST_CASE("eta_f with a kernel defined over an extension") {
  Twist T = golden_twist();
  const Curve& C = T.C;
  KernelData V = enumerate_kernel(C, {3, {T.map(golden_T1()), T.map(golden_T2())}});
  Rng rng(5);
  Divisor y = random_jacobian_point(C, rng);
  Divisor a1{PolyF::linear_root(Fq(C.K, 179) * T.d.inv()), PolyF()};
  EtafOptions o;
  o.seed = 17;
  EtafContext orb(C, V, level2_cycle(C, a1), y, o);
  o.mode = KernelMode::Enumerate;
  o.phi_u = orb.phi_u();
  o.phi_y = orb.phi_y();
  EtafContext en(C, V, level2_cycle(C, a1), y, o);
  int agreed = 0;
  for (int i = 0; i < 20; ++i) {
    Divisor x = random_jacobian_point(C, rng);
    auto a = orb.phi_V(x), b = en.phi_V(x);
    if (!a || !b) continue;
    CHECK(a->field() == C.K);
    CHECK(*a == b->descend_to(C.K));
    ++agreed;
  }
  CHECK(agreed >= 18);
  Divisor x = random_jacobian_point(C, rng);
  auto v = orb.eval(x);
  REQUIRE(v);
  for (size_t i = 1; i < V.elements.size(); i += 3) {
    auto vw = orb.eval(cantor_add(C, lift_divisor(x, V.M), V.elements[i]));
    if (vw) CHECK(vw->descend_to(C.K) == *v);
  }
}
