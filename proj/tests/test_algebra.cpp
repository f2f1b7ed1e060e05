#include "doctest.h"
#include "hyperiso/factor.hpp"
#include "hyperiso/fraction.hpp"
#include "hyperiso/linalg.hpp"
#include "hyperiso/series.hpp"

using namespace hyperiso;

namespace {

PolyF random_poly(const FieldCtx* F, int deg, Rng& rng, bool monic) {
  std::vector<Fq> c;
  for (int i = 0; i < deg; ++i) c.push_back(random_element(F, rng));
  c.push_back(monic ? Fq(F, 1) : random_element(F, rng));
  return PolyF(c);
}

Series random_series(const FieldCtx* F, int prec, Rng& rng) {
  std::vector<Fq> c;
  for (int i = 0; i < prec; ++i) c.push_back(random_element(F, rng));
  return Series::from_coeffs(F, c, prec);
}

}  // namespace

TEST_CASE("series arithmetic and precision bookkeeping") {
  Rng rng(11);
  const FieldCtx* F = prime_field(1009);
  Series a = random_series(F, 12, rng), b = random_series(F, 9, rng);
  CHECK((a * b).prec() == 9);
  CHECK((a + b).prec() == 9);
  CHECK(a.derivative().prec() == 11);
  Series u = a + Fq(F, 1) - a.truncate(1) + Series::constant(a[0], 12);
  CHECK(u.is_unit());
  CHECK(u * u.inv() == u.one());

  SUBCASE("square roots") {
    Series one = Series::constant(Fq(F, 1), 7);
    CHECK(one.sqrt() == one);
    Series onept = Series::linear(Fq(F, 1), Fq(F, 1), 5);
    CHECK((onept * onept).sqrt() == onept);
    for (int i = 0; i < 50; ++i) {
      Series r = random_series(F, 20, rng);
      if (r[0].is_zero()) continue;
      Series s = r * r;
      Series q = s.sqrt();
      CHECK(q * q == s);
      CHECK(q[0].is_canonical_sign());
      CHECK(s.sqrt(-q[0]) == -q);
    }
    CHECK_THROWS_AS(Series::linear(Fq(F, 0), Fq(F, 1), 4).sqrt(), ZeroConstantTerm);
  }

  SUBCASE("exact division by positive valuation") {
    Series d = Series::linear(Fq(F, 0), Fq(F, 3), 10);
    Series n = d * a;
    Series q = n.div_exact(d);
    CHECK(q.prec() == 9);
    CHECK(q == a.truncate(9));
    CHECK_THROWS_AS(a.div_exact(d), NonUnit);
  }
}

TEST_CASE("polynomial factorisation and roots") {
  Rng rng(5);
  const FieldCtx* F = prime_field(1009);
  PolyF f = product_of_linears({Fq(F, 179), Fq(F, 237), Fq(F, 325), Fq(F, 344), Fq(F, 673)}, F);
  auto rs = roots(f);
  REQUIRE(rs.size() == 5);
  CHECK(rs[0].first == Fq(F, 179));
  CHECK(rs[4].first == Fq(F, 673));

  for (int trial = 0; trial < 30; ++trial) {
    PolyF a = random_poly(F, 1 + static_cast<int>(rng.below(4)), rng, true);
    PolyF b = random_poly(F, 1 + static_cast<int>(rng.below(3)), rng, true);
    PolyF g = a * a * b;
    PolyF prod = PolyF::constant(Fq(F, 1));
    for (auto& [h, m] : factor(g)) {
      CHECK(is_irreducible_poly(h));
      for (int i = 0; i < m; ++i) prod = prod * h;
    }
    CHECK(prod == g);
  }

  SUBCASE("splitting fields") {
    PolyF q = poly_from_ints(F, {-11, 0, 1});
    if (!Fq(F, 11).is_square()) {
      const FieldCtx* L = splitting_field(q, F);
      CHECK(L->degree == 2);
      auto r = roots_in(q, L);
      CHECK(r.size() == 2);
      CHECK(r[0].first * r[0].first == Fq(L, 11));
    }
    PolyF c = random_poly(F, 3, rng, true);
    while (!is_irreducible_poly(c)) c = random_poly(F, 3, rng, true);
    PolyF m = q * c;
    const FieldCtx* L = splitting_field(m, F);
    int expected = Fq(F, 11).is_square() ? 3 : 6;
    CHECK(L->degree == expected);
    CHECK(roots_in(m, L).size() == 5);
    CHECK(extension_of_degree(F, 3) == extension_of_degree(F, 3));
  }

  SUBCASE("interpolation") {
    std::vector<Fq> xs, ys;
    for (int i = 0; i < 6; ++i) {
      xs.push_back(Fq(F, 3 * i + 1));
      ys.push_back(random_element(F, rng));
    }
    PolyF p = interpolate(xs, ys);
    for (int i = 0; i < 6; ++i) CHECK(p.eval(xs[i]) == ys[i]);
  }
}

TEST_CASE("linear algebra") {
  Rng rng(3);
  const FieldCtx* F = prime_field(1009);
  for (int t = 0; t < 20; ++t) {
    Matrix A(4, Vector(4));
    for (auto& r : A)
      for (auto& x : r) x = random_element(F, rng);
    auto inv = inverse(A);
    if (!inv) continue;
    CHECK(mat_mul(A, *inv) == identity_matrix(F, 4));
    CHECK(det(A) == det_laplace(A));
  }
  Matrix B = {{Fq(F, 1), Fq(F, 2), Fq(F, 3)}, {Fq(F, 2), Fq(F, 4), Fq(F, 6)}};
  auto ns = null_space(B, 3, F);
  CHECK(ns.size() == 2);
  for (auto& v : ns) CHECK(mat_vec(B, v) == Vector{Fq(F, 0), Fq(F, 0)});
  CHECK(rank(B) == 1);
}

TEST_CASE("fraction reconstruction") {
  const FieldCtx* F = prime_field(1009);
  SUBCASE("geometric series") {
    Series s = expand_fraction(poly_from_ints(F, {1}), poly_from_ints(F, {1, -1}), 10, F);
    auto [n, d] = reconstruct_fraction(s, 0, 1);
    CHECK(n == poly_from_ints(F, {1}));
    CHECK(d == poly_from_ints(F, {1, -1}));
  }
  SUBCASE("t / (1 + t^2)") {
    Series s = expand_fraction(poly_from_ints(F, {0, 1}), poly_from_ints(F, {1, 0, 1}), 10, F);
    auto [n, d] = reconstruct_fraction(s, 1, 2);
    CHECK(n == poly_from_ints(F, {0, 1}));
    CHECK(d == poly_from_ints(F, {1, 0, 1}));
  }
  SUBCASE("expand then reconstruct on random fractions") {
    Rng rng(2024);
    int done = 0;
    while (done < 500) {
      const int dn = static_cast<int>(rng.below(7)), dd = static_cast<int>(rng.below(7));
      PolyF N = random_poly(F, dn, rng, false), D = random_poly(F, dd, rng, false);
      if (N.is_zero() || D.is_zero() || D[0].is_zero()) continue;
      PolyF g = gcd(N, D);
      N = N / g;
      D = D / g;
      const Fq c = D[0].inv();
      N = N.scale(c);
      D = D.scale(c);
      Series s = expand_fraction(N, D, 16, F);
      auto [n2, d2] = reconstruct_fraction(s, 6, 6);
      CHECK(n2 == N);
      CHECK(d2 == D);
      ++done;
    }
  }
  SUBCASE("bounds too small") {
    Series s = expand_fraction(poly_from_ints(F, {1, 2, 3}), poly_from_ints(F, {1, 5, 7}), 12, F);
    CHECK_THROWS_AS(reconstruct_fraction(s, 1, 1), NoConvergence);
  }
}
