#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "hyperiso/factor.hpp"
#include "hyperiso/rng.hpp"
#include "hyperiso/series.hpp"

namespace hyperiso {

struct SpecialPoint : MathError {
  using MathError::MathError;
};
struct TooLarge : MathError {
  using MathError::MathError;
};

/// Y^2 = f(X) with deg f = 2g+1 over the level K.
struct Curve {
  int g = 2;
  PolyF f;
  const FieldCtx* K = nullptr;

  Curve() = default;
  /// Validates degree, squarefreeness and odd characteristic.
  Curve(const FieldCtx* K, const PolyF& f);
  uint64_t p() const { return K->p; }
};

/// Affine point or the point at infinity; coordinates may lie in an extension.
struct Point {
  bool inf = false;
  Fq x, y;
  static Point infinity() { return Point{true, {}, {}}; }
  bool operator==(const Point& o) const { return inf == o.inf && (inf || (x == o.x && y == o.y)); }
};

bool on_curve(const Curve& C, const Point& P);

/// Mumford pair over a ring R (field elements or power series).
template <class R>
struct MumfordT {
  Poly<R> u, v;
  bool is_zero() const { return u.degree() == 0; }
  bool operator==(const MumfordT& o) const { return u == o.u && v == o.v; }
  bool operator!=(const MumfordT& o) const { return !(*this == o); }
};
using Divisor = MumfordT<Fq>;

template <class R>
struct ComposeResult {
  MumfordT<R> D;   // semi-reduced sum
  Poly<R> d;       // gcd with D1 + D2 = D + div(d)
};

/// Cantor composition of two semi-reduced divisors on Y^2 = f.
template <class R>
ComposeResult<R> cantor_compose(const MumfordT<R>& a, const MumfordT<R>& b, const Poly<R>& f, const R& one) {
  auto x1 = xgcd(a.u, b.u, one);
  auto x2 = xgcd(x1.g, a.v + b.v, one);
  const Poly<R>& d = x2.g;
  Poly<R> s1 = x2.s * x1.s, s2 = x2.s * x1.t, s3 = x2.t;
  Poly<R> u = (a.u * b.u) / (d * d);
  Poly<R> num = s1 * a.u * b.v + s2 * b.u * a.v + s3 * (a.v * b.v + f);
  Poly<R> v = (num / d) % u;
  return {{u, v}, d};
}

/// One reduction step: A - deg(u) O is equivalent to the returned divisor via (y - v)/u'.
template <class R>
MumfordT<R> cantor_reduce_step(const MumfordT<R>& a, const Poly<R>& f) {
  Poly<R> u2 = ((f - a.v * a.v) / a.u).monic();
  Poly<R> v2 = (-a.v) % u2;
  return {u2, v2};
}

template <class R>
MumfordT<R> cantor_reduce(MumfordT<R> a, const Poly<R>& f, int g) {
  while (a.u.degree() > g) a = cantor_reduce_step(a, f);
  a.v = a.v % a.u;
  return a;
}

template <class R>
MumfordT<R> cantor_add_generic(const MumfordT<R>& a, const MumfordT<R>& b, const Poly<R>& f, int g, const R& one) {
  return cantor_reduce(cantor_compose(a, b, f, one).D, f, g);
}

template <class R>
MumfordT<R> negate_generic(const MumfordT<R>& a) {
  return {a.u, (-a.v) % a.u};
}

Divisor zero_divisor(const FieldCtx* F);
bool is_valid(const Curve& C, const Divisor& D);
const FieldCtx* divisor_field(const Divisor& D, const FieldCtx* fallback);
Divisor lift_divisor(const Divisor& D, const FieldCtx* F);
Divisor cantor_add(const Curve& C, const Divisor& a, const Divisor& b);
Divisor negate(const Divisor& a);
Divisor cantor_sub(const Curve& C, const Divisor& a, const Divisor& b);
Divisor scalar_mul(const Curve& C, const mpz_class& n, const Divisor& a);
Divisor scalar_mul(const Curve& C, int64_t n, const Divisor& a);
/// Class of P - O.
Divisor from_point(const Curve& C, const Point& P);
/// Reduced class of sum (P_i - O).
Divisor from_points(const Curve& C, const std::vector<Point>& pts);
/// u squarefree (no repeated support point).
bool is_simple(const Divisor& D);

/// Affine support points with multiplicity over the splitting field of u, canonical root order.
std::vector<Point> mumford_decompose(const Curve& C, const Divisor& D, const FieldCtx** split = nullptr);

/// Random affine point of C over F (not a Weierstrass point).
Point random_curve_point(const Curve& C, const FieldCtx* F, Rng& rng);
/// Random class of g distinct affine points minus gO over F.
Divisor random_jacobian_point(const Curve& C, Rng& rng, const FieldCtx* F = nullptr);

/// Number of points of C over F (including O).
mpz_class count_points(const Curve& C, const FieldCtx* F);
/// #J_C(F_p) for genus 2 by point counting over F_p and F_{p^2}.
mpz_class jacobian_order_naive(const Curve& C, uint64_t max_p = 1ULL << 16);

}  // namespace hyperiso
