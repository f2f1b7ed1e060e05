#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "hyperiso/curve.hpp"

namespace hyperiso {

/// chi(t) = t^4 - a1 t^3 + a2 t^2 - p a1 t + p^2 for a genus-2 curve over F_p.
struct FrobeniusPolynomial {
  mpz_class a1, a2, p;
  /// #J(F_{p^k}) from the power sums of the Frobenius roots.
  mpz_class jacobian_order(int k = 1) const;
  /// Roots of chi mod l with multiplicities.
  std::vector<std::pair<int, int>> roots_mod(int l) const;
};

/// Coefficients of h^k up to x^n by the recurrence h (h^k)' = k h' h^k; needs h(0) != 0 and n < p.
std::vector<uint64_t> power_coefficients(const std::vector<uint64_t>& h, uint64_t k, size_t n, uint64_t p);

/// a1 from the affine point count, a2 mod p from the Hasse-Witt matrix, fixed by orders of random points.
/// Throws Ambiguous when several candidates survive.
FrobeniusPolynomial frobenius_polynomial_g2(const Curve& C, Rng& rng);

/// Curve with a Frobenius-stable isotropic (ell, ell) subgroup spanned by two eigenvectors of Frobenius.
struct KernelInstance {
  Curve C;
  int ell = 0;
  const FieldCtx* M = nullptr;
  std::vector<Divisor> generators;
  FrobeniusPolynomial chi;
  int lambda1 = 0, lambda2 = 0;
};

/// Kernel of eigenvectors for eigenvalues l1, l2 with l1 l2 != p mod ell, over the smallest field up to max_degree.
std::optional<KernelInstance> eigen_kernel(const Curve& C, int ell, int max_degree, Rng& rng);
/// Y^2 = prod (X - r_i) over 2g + 1 distinct nonzero r_i drawn from K.
Curve random_split_curve(const FieldCtx* K, int g, Rng& rng);
/// Random split genus-2 curves until one carries an eigen_kernel.
std::optional<KernelInstance> random_kernel_instance(const FieldCtx* K, int ell, int max_degree, Rng& rng,
                                                     int max_curves = 1000);

}  // namespace hyperiso
