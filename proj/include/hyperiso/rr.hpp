#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hyperiso/curve.hpp"
#include "hyperiso/linalg.hpp"

namespace hyperiso {

struct NotPrincipal : MathError {
  using MathError::MathError;
};
struct DegenerateDivisor : MathError {
  using MathError::MathError;
};
struct CannotAvoid : MathError {
  using MathError::MathError;
};

/// (a(x) + y b(x)) / c(x)
struct PlaneFunction {
  PolyF a, b, c;
};

/// Lazy product of plane functions with integer exponents.
struct FactoredFunction {
  std::vector<std::pair<PlaneFunction, int64_t>> factors;
};

/// Effective divisor A + k O with A given by a semi-reduced Mumford pair.
struct EffectiveDivisor {
  Divisor A;
  int k = 0;
  int degree() const { return A.u.degree() + k; }
};

/// Basis f_k = (a_k + y b_k)/u_A of L(A + (2g-1-deg A) O).
struct RRBasis {
  Divisor A;
  std::vector<std::pair<PolyF, PolyF>> ab;
};

RRBasis rr_basis(const Curve& C, const Divisor& A);

/// Function with divisor sum e_i (A_i - deg(A_i) O), built from Cantor certificates.
FactoredFunction principal_function(const Curve& C, const std::vector<std::pair<Divisor, int64_t>>& terms);

/// Effective degree-(2g-1) divisor in the class u + (2g-1) o - omega, disjoint from `avoid`.
EffectiveDivisor choose_representative_divisor(const Curve& C, const Divisor& u, const std::vector<Point>& avoid);

/// Pointwise value at an affine point; nullopt at poles or indeterminate points.
std::optional<Fq> eval_at_point(const PlaneFunction& f, const Point& P);
std::optional<Fq> eval_at_point(const FactoredFunction& h, const Point& P);

/// Order of vanishing of a(x) + y b(x) at P (affine or infinity).
int valuation_numerator(const Curve& C, const PolyF& a, const PolyF& b, const Point& P);
/// Order of vanishing of c(x) at P.
int valuation_poly(const Curve& C, const PolyF& c, const Point& P);
int valuation(const Curve& C, const PlaneFunction& f, const Point& P);

template <class R>
R ring_pow(R base, uint64_t e) {
  R r = one_like(base);
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

/// det of multiplication by p on R[X]/(u), u monic; equals prod p(x_j) over the roots of u.
template <class R>
R norm_mod(const Poly<R>& p, const Poly<R>& u, const R& proto) {
  const int n = u.degree();
  if (n <= 0) return one_like(proto);
  std::vector<std::vector<R>> M(n, std::vector<R>(n, zero_like(proto)));
  Poly<R> col = p % u;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= col.degree(); ++i) M[i][j] = col[i];
    col = (col.shift_up(1)) % u;
  }
  return det_laplace(M);
}

/// Coefficient matrix of p_k mod u (rows k), each of degree < deg u.
template <class R>
std::vector<std::vector<R>> coeff_rows(const std::vector<Poly<R>>& ps, const Poly<R>& u, const R& proto) {
  const int n = u.degree();
  std::vector<std::vector<R>> M(ps.size(), std::vector<R>(n, zero_like(proto)));
  for (size_t k = 0; k < ps.size(); ++k) {
    Poly<R> r = ps[k] % u;
    for (int i = 0; i <= r.degree(); ++i) M[k][i] = r[i];
  }
  return M;
}

template <class R>
struct RingFraction {
  R num, den;
};

/// prod over the support points X_j of x of h(X_j), as a numerator/denominator pair.
template <class R, class Conv>
RingFraction<R> alpha_symmetric(const FactoredFunction& h, const Poly<R>& ux, const Poly<R>& vx, const R& proto,
                                Conv conv) {
  R num = one_like(proto), den = one_like(proto);
  for (const auto& [phi, e] : h.factors) {
    R top = norm_mod(conv(phi.a) + vx * conv(phi.b), ux, proto);
    R bot = norm_mod(conv(phi.c), ux, proto);
    const uint64_t m = static_cast<uint64_t>(e < 0 ? -e : e);
    if (e > 0) {
      num = num * ring_pow(top, m);
      den = den * ring_pow(bot, m);
    } else if (e < 0) {
      num = num * ring_pow(bot, m);
      den = den * ring_pow(top, m);
    }
  }
  return {num, den};
}

}  // namespace hyperiso
