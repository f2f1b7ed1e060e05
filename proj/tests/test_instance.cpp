#include "doctest.h"
#include "fixtures.hpp"
#include "hyperiso/instance.hpp"
#include "hyperiso/kernel_etaf.hpp"

using namespace hyperiso;
using namespace fixtures;

TEST_CASE("power coefficients by recurrence") {
  const uint64_t p = 1009;
  const FieldCtx* F = prime_field(p);
  const PolyF h = poly_from_ints(F, {3, 5, 0, 7, 1});
  PolyF pw = PolyF::constant(Fq(F, 1));
  for (int i = 0; i < 9; ++i) pw = pw * h;
  const auto c = power_coefficients({3, 5, 0, 7, 1}, 9, 36, p);
  for (int i = 0; i <= 36; ++i) CHECK(c[i] == pw[i].coord(0));
  CHECK_THROWS_AS(power_coefficients({0, 1}, 3, 4, p), std::invalid_argument);
}

TEST_CASE("Frobenius polynomial against naive counts") {
  Rng rng(31);
  for (uint64_t p : {503ULL, 1009ULL, 1213ULL}) {
    const FieldCtx* F = prime_field(p);
    for (int i = 0; i < 3; ++i) {
      Curve C = random_curve(F, 2, rng);
      if (i == 0) C = Curve(F, C.f - PolyF::constant(C.f[0]) + poly_from_ints(F, {0, 1}));
      const FrobeniusPolynomial chi = frobenius_polynomial_g2(C, rng);
      CHECK(chi.jacobian_order(1) == jacobian_order_naive(C));
      const FieldCtx* F2 = extension_of_degree(F, 2);
      for (int j = 0; j < 3; ++j) CHECK(scalar_mul(C, chi.jacobian_order(2), random_jacobian_point(C, rng, F2)).is_zero());
      // The twist negates a1.
      const FrobeniusPolynomial tw = frobenius_polynomial_g2(quadratic_twist(C), rng);
      CHECK(tw.a1 == -chi.a1);
      CHECK(tw.a2 == chi.a2);
    }
  }
}

TEST_CASE("eigenvector kernels are Frobenius-stable and isotropic") {
  Rng rng(8);
  for (int ell : {3, 5}) {
    auto inst = random_kernel_instance(prime_field(1009), ell, 6, rng, 200);
    REQUIRE(inst);
    const Curve CM(inst->M, inst->C.f);
    const int lam[2] = {inst->lambda1, inst->lambda2};
    CHECK((lam[0] * lam[1]) % ell != static_cast<int>(1009 % ell));
    for (int k = 0; k < 2; ++k) {
      const Divisor& T = inst->generators[k];
      CHECK_FALSE(T.is_zero());
      CHECK(scalar_mul(CM, ell, T).is_zero());
      CHECK(frobenius(T, inst->C.K) == scalar_mul(CM, lam[k], T));
    }
    const KernelData V = enumerate_kernel(inst->C, {ell, inst->generators});
    CHECK(V.elements.size() == static_cast<size_t>(ell * ell));
  }
}
