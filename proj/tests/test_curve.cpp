#include "doctest.h"
#include "hyperiso/curve.hpp"

using namespace hyperiso;

namespace {

Curve golden_curve() {
  const FieldCtx* F = prime_field(1009);
  return Curve(F, product_of_linears({Fq(F, 179), Fq(F, 237), Fq(F, 325), Fq(F, 344), Fq(F, 673)}, F));
}

Divisor mumford(const FieldCtx* F, std::vector<int64_t> u, std::vector<int64_t> v) {
  return {poly_from_ints(F, u), poly_from_ints(F, v)};
}

}  // namespace

TEST_CASE("Cantor arithmetic on the golden curve") {
  Curve C = golden_curve();
  const FieldCtx* F = C.K;
  Divisor T1 = mumford(F, {513, 714, 1}, {273, 182});
  Divisor T2 = mumford(F, {51, 654, 1}, {545, 804});
  REQUIRE(is_valid(C, T1));
  REQUIRE(is_valid(C, T2));
  Divisor O = zero_divisor(F);
  CHECK(cantor_add(C, T1, O) == T1);
  CHECK(cantor_add(C, T1, negate(T1)) == O);
  CHECK(cantor_add(C, cantor_add(C, T1, T1), T1) == O);
  CHECK(scalar_mul(C, 3, T2) == O);
  CHECK(scalar_mul(C, 1, T2) == T2);
  Divisor w2 = scalar_mul(C, 2, T1);
  CHECK(scalar_mul(C, 2, w2) == T1);

  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    Divisor a = random_jacobian_point(C, rng), b = random_jacobian_point(C, rng), c = random_jacobian_point(C, rng);
    CHECK(is_valid(C, a));
    CHECK(a.u.degree() == 2);
    CHECK(cantor_add(C, a, b) == cantor_add(C, b, a));
    CHECK(cantor_add(C, cantor_add(C, a, b), c) == cantor_add(C, a, cantor_add(C, b, c)));
    const int64_t m = static_cast<int64_t>(rng.below(50)), n = static_cast<int64_t>(rng.below(50));
    CHECK(scalar_mul(C, m + n, a) == cantor_add(C, scalar_mul(C, m, a), scalar_mul(C, n, a)));
  }
}

TEST_CASE("Mumford decomposition") {
  Curve C = golden_curve();
  const FieldCtx* F = C.K;
  Rng rng(9);
  int irreducible = 0;
  for (int i = 0; i < 100; ++i) {
    Divisor a = cantor_add(C, random_jacobian_point(C, rng), random_jacobian_point(C, rng));
    const FieldCtx* L = nullptr;
    auto pts = mumford_decompose(C, a, &L);
    CHECK(static_cast<int>(pts.size()) == a.u.degree());
    if (L != F) ++irreducible;
    for (auto& P : pts) {
      CHECK(on_curve(C, P));
      CHECK(a.u.eval(P.x).is_zero());
    }
    Divisor back = lift_divisor(from_points(C, pts), L);
    CHECK(back == lift_divisor(a, L));
  }
  CHECK(irreducible > 20);

  Point P = random_curve_point(C, F, rng);
  Divisor dbl = cantor_add(C, from_point(C, P), from_point(C, P));
  CHECK_FALSE(is_simple(dbl));
  auto pts = mumford_decompose(C, dbl);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0] == P);
  CHECK(pts[1] == P);
}

TEST_CASE("random Jacobian points are reproducible") {
  Curve C = golden_curve();
  Rng a(42), b(42);
  CHECK(random_jacobian_point(C, a) == random_jacobian_point(C, b));
}

TEST_CASE("naive Jacobian order") {
  SUBCASE("y^2 = x^5 + x over F_7 against divisor enumeration") {
    const FieldCtx* F = prime_field(7);
    Curve C(F, poly_from_ints(F, {0, 1, 0, 0, 0, 1}));
    int count = 0;
    // u = 1, u = X - a, u = X^2 + bX + c, v of degree < deg u
    count += 1;
    for (int a = 0; a < 7; ++a)
      for (int v0 = 0; v0 < 7; ++v0)
        if (is_valid(C, mumford(F, {-a, 1}, {v0}))) ++count;
    for (int c = 0; c < 7; ++c)
      for (int b = 0; b < 7; ++b)
        for (int v0 = 0; v0 < 7; ++v0)
          for (int v1 = 0; v1 < 7; ++v1)
            if (is_valid(C, mumford(F, {c, b, 1}, {v0, v1}))) ++count;
    CHECK(jacobian_order_naive(C) == count);
  }
  SUBCASE("golden curve") {
    Curve C = golden_curve();
    mpz_class n = jacobian_order_naive(C);
    CHECK(n % 9 == 0);
    Divisor T1 = mumford(C.K, {513, 714, 1}, {273, 182});
    CHECK(scalar_mul(C, n, T1).is_zero());
    Rng rng(3);
    for (int i = 0; i < 100; ++i) CHECK(scalar_mul(C, n, random_jacobian_point(C, rng)).is_zero());
  }
}
