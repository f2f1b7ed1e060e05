#include "hyperiso/curve.hpp"

#include <algorithm>
#include <stdexcept>

namespace hyperiso {

Curve::Curve(const FieldCtx* K_, const PolyF& f_) : f(poly_lift(f_, K_)), K(K_) {
  if (K->p == 2) throw std::invalid_argument("characteristic 2 is not supported");
  const int d = f.degree();
  if (d % 2 == 0) throw std::invalid_argument("only imaginary models (odd degree 2g+1) are supported");
  g = (d - 1) / 2;
  if (g < 1 || g > 3) throw std::invalid_argument("curve genus must be 1, 2 or 3");
  if (gcd(f, f.derivative()).degree() > 0) throw std::invalid_argument("curve polynomial is not squarefree");
}

bool on_curve(const Curve& C, const Point& P) {
  if (P.inf) return true;
  return P.y * P.y == C.f.eval(P.x);
}

Divisor zero_divisor(const FieldCtx* F) { return {PolyF::constant(Fq(F, 1)), PolyF()}; }

const FieldCtx* divisor_field(const Divisor& D, const FieldCtx* fallback) {
  return poly_field(D.v, poly_field(D.u, fallback));
}

Divisor lift_divisor(const Divisor& D, const FieldCtx* F) { return {poly_lift(D.u, F), poly_lift(D.v, F)}; }

bool is_valid(const Curve& C, const Divisor& D) {
  if (D.u.is_zero() || !D.u.is_monic()) return false;
  if (D.u.degree() > C.g) return false;
  if (!D.v.is_zero() && D.v.degree() >= D.u.degree()) return false;
  return ((D.v * D.v - C.f) % D.u).is_zero();
}

Divisor cantor_add(const Curve& C, const Divisor& a, const Divisor& b) {
  const FieldCtx* F = divisor_field(b, divisor_field(a, C.K));
  return cantor_add_generic(a, b, C.f, C.g, Fq(F, 1));
}

Divisor negate(const Divisor& a) { return negate_generic(a); }

Divisor cantor_sub(const Curve& C, const Divisor& a, const Divisor& b) { return cantor_add(C, a, negate(b)); }

Divisor scalar_mul(const Curve& C, const mpz_class& n, const Divisor& a) {
  if (n < 0) return scalar_mul(C, mpz_class(-n), negate(a));
  const FieldCtx* F = divisor_field(a, C.K);
  Divisor r = zero_divisor(F);
  const size_t bits = n == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = cantor_add(C, r, r);
    if (mpz_tstbit(n.get_mpz_t(), i)) r = cantor_add(C, r, a);
  }
  return r;
}

Divisor scalar_mul(const Curve& C, int64_t n, const Divisor& a) { return scalar_mul(C, mpz_class(std::to_string(n)), a); }

Divisor from_point(const Curve& C, const Point& P) {
  if (P.inf) return zero_divisor(C.K);
  return {PolyF::linear_root(P.x), PolyF::constant(P.y)};
}

Divisor from_points(const Curve& C, const std::vector<Point>& pts) {
  Divisor acc = zero_divisor(C.K);
  for (const auto& P : pts) acc = cantor_add(C, acc, from_point(C, P));
  return acc;
}

bool is_simple(const Divisor& D) { return D.u.degree() <= 1 || gcd(D.u, D.u.derivative()).degree() == 0; }

std::vector<Point> mumford_decompose(const Curve& C, const Divisor& D, const FieldCtx** split) {
  const FieldCtx* K = divisor_field(D, C.K);
  const FieldCtx* L = D.u.degree() > 0 ? splitting_field(D.u, K) : K;
  if (split) *split = L;
  std::vector<Point> pts;
  for (auto& [r, m] : roots_in(D.u, L)) {
    Point P{false, r, D.v.is_zero() ? Fq(L, 0) : D.v.eval(r)};
    for (int i = 0; i < m; ++i) pts.push_back(P);
  }
  return pts;
}

Point random_curve_point(const Curve& C, const FieldCtx* F, Rng& rng) {
  while (true) {
    Fq x = random_element(F, rng);
    Fq fx = C.f.eval(x);
    if (fx.is_zero()) continue;
    auto y = fx.sqrt();
    if (!y) continue;
    if (rng.below(2)) *y = -*y;
    return {false, x, *y};
  }
}

Divisor random_jacobian_point(const Curve& C, Rng& rng, const FieldCtx* F) {
  if (!F) F = C.K;
  std::vector<Fq> xs, ys;
  while (static_cast<int>(xs.size()) < C.g) {
    Point P = random_curve_point(C, F, rng);
    if (std::any_of(xs.begin(), xs.end(), [&](const Fq& x) { return x == P.x; })) continue;
    xs.push_back(P.x);
    ys.push_back(P.y);
  }
  return {product_of_linears(xs, F), interpolate(xs, ys)};
}

mpz_class count_points(const Curve& C, const FieldCtx* F) {
  const PolyF f = poly_lift(C.f, F);
  mpz_class n = 1;  // point at infinity
  std::vector<uint64_t> coords(F->degree, 0);
  const uint64_t p = F->p;
  // enumerate F by its coordinate vectors
  while (true) {
    Fq x = Fq::from_coords(F, coords);
    Fq fx = f.eval(x);
    if (fx.is_zero())
      n += 1;
    else if (fx.is_square())
      n += 2;
    int i = 0;
    while (i < F->degree && ++coords[i] == p) coords[i++] = 0;
    if (i == F->degree) break;
  }
  return n;
}

mpz_class jacobian_order_naive(const Curve& C, uint64_t max_p) {
  if (C.g != 2) throw std::invalid_argument("naive Jacobian order is implemented for genus 2 only");
  if (C.K->degree != 1) throw std::invalid_argument("naive Jacobian order needs a prime base field");
  if (C.p() > max_p) throw TooLarge("field too large for naive point counting");
  const FieldCtx* Fp = C.K;
  const FieldCtx* Fp2 = extension_of_degree(Fp, 2);
  mpz_class n1 = count_points(C, Fp);
  mpz_class n2 = count_points(C, Fp2);
  return (n1 * n1 + n2) / 2 - mpz_class(std::to_string(C.p()));
}

}  // namespace hyperiso
