#pragma once

#include <algorithm>
#include <gmpxx.h>
#include <ostream>
#include <utility>
#include <vector>

namespace hyperiso {

/// Dense univariate polynomial over a commutative ring R, ascending coefficients, no trailing zeros.
///
/// R must provide +, -, *, ==, is_zero(), inv() (throwing for non-units) and the free functions
/// zero_like, one_like, int_like.
template <class R>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<R> c) : c_(std::move(c)) { trim(); }

  static Poly constant(const R& a) { return Poly(std::vector<R>{a}); }
  static Poly monomial(const R& a, int d) {
    std::vector<R> c(d + 1, zero_like(a));
    c[d] = a;
    return Poly(std::move(c));
  }
  static Poly x(const R& one) { return monomial(one, 1); }
  /// X - a
  static Poly linear_root(const R& a) { return Poly(std::vector<R>{-a, one_like(a)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<R>& coeffs() const { return c_; }
  const R& operator[](int i) const { return c_[i]; }
  const R& lead() const { return c_.back(); }
  R coeff(int i, const R& proto) const { return (i >= 0 && i <= degree()) ? c_[i] : zero_like(proto); }
  bool is_monic() const { return !c_.empty() && c_.back() == one_like(c_.back()); }

  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  Poly operator+(const Poly& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    std::vector<R> r(std::max(c_.size(), o.c_.size()), zero_like(c_[0]));
    for (size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] = r[i] + o.c_[i];
    return Poly(std::move(r));
  }
  Poly operator-() const {
    std::vector<R> r(c_);
    for (auto& a : r) a = -a;
    return Poly(std::move(r));
  }
  Poly operator-(const Poly& o) const { return *this + (-o); }
  Poly operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<R> r(c_.size() + o.c_.size() - 1, zero_like(c_[0]));
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] = r[i + j] + c_[i] * o.c_[j];
    }
    return Poly(std::move(r));
  }
  template <class S>
  Poly scale(const S& s) const {
    std::vector<R> r(c_);
    for (auto& a : r) a = a * s;
    return Poly(std::move(r));
  }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  bool operator==(const Poly& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (size_t i = 0; i < c_.size(); ++i)
      if (!(c_[i] == o.c_[i])) return false;
    return true;
  }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  /// Horner evaluation at x in R or in any ring S accepting S*S and S+R.
  template <class S>
  S eval(const S& x) const {
    S acc = zero_like(x);
    for (int i = degree(); i >= 0; --i) acc = acc * x + c_[i];
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<R> r(c_.size() - 1, zero_like(c_[0]));
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * int_like(c_[i], static_cast<int64_t>(i));
    return Poly(std::move(r));
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return scale(lead().inv());
  }

  /// p(q(X))
  Poly compose(const Poly& q) const {
    Poly acc;
    for (int i = degree(); i >= 0; --i) acc = acc * q + constant(c_[i]);
    return acc;
  }

  /// Multiply by X^k.
  Poly shift_up(int k) const {
    if (is_zero()) return *this;
    std::vector<R> r(k, zero_like(c_[0]));
    r.insert(r.end(), c_.begin(), c_.end());
    return Poly(std::move(r));
  }
  /// Keep terms of degree < k.
  Poly truncate(int k) const {
    std::vector<R> r(c_.begin(), c_.begin() + std::min<size_t>(c_.size(), std::max(k, 0)));
    return Poly(std::move(r));
  }

  template <class Fn>
  auto map(Fn fn) const {
    using S = decltype(fn(c_[0]));
    std::vector<S> r;
    r.reserve(c_.size());
    for (const auto& a : c_) r.push_back(fn(a));
    return Poly<S>(std::move(r));
  }

 private:
  std::vector<R> c_;
};

template <class R>
Poly<R> operator*(const Poly<R>& p, const R& s) {
  return p.scale(s);
}

/// Division with remainder; the divisor's leading coefficient must be a unit.
template <class R>
std::pair<Poly<R>, Poly<R>> divmod(const Poly<R>& a, const Poly<R>& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly<R>(), a};
  const R inv = b.lead().inv();
  std::vector<R> rem(a.coeffs());
  const int db = b.degree();
  std::vector<R> q(a.degree() - db + 1, zero_like(b.lead()));
  for (int i = a.degree(); i >= db; --i) {
    if (rem[i].is_zero()) continue;
    R f = rem[i] * inv;
    q[i - db] = f;
    for (int j = 0; j <= db; ++j) rem[i - db + j] = rem[i - db + j] - f * b[j];
  }
  rem.resize(db);
  return {Poly<R>(std::move(q)), Poly<R>(std::move(rem))};
}

template <class R>
Poly<R> operator/(const Poly<R>& a, const Poly<R>& b) {
  return divmod(a, b).first;
}
template <class R>
Poly<R> operator%(const Poly<R>& a, const Poly<R>& b) {
  return divmod(a, b).second;
}

/// Monic gcd; both inputs zero gives zero.
template <class R>
Poly<R> gcd(Poly<R> a, Poly<R> b) {
  while (!b.is_zero()) {
    auto r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <class R>
struct XgcdResult {
  Poly<R> g, s, t;  // g = s*a + t*b, g monic (or zero)
};

/// Extended Euclid. Requires every remainder's leading coefficient to be a unit.
template <class R>
XgcdResult<R> xgcd(const Poly<R>& a, const Poly<R>& b, const R& proto) {
  Poly<R> r0 = a, r1 = b;
  Poly<R> s0 = Poly<R>::constant(one_like(proto)), s1;
  Poly<R> t0, t1 = Poly<R>::constant(one_like(proto));
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly<R> s2 = s0 - q * s1;
    Poly<R> t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  const R inv = r0.lead().inv();
  return {r0.scale(inv), s0.scale(inv), t0.scale(inv)};
}

template <class R>
Poly<R> mulmod(const Poly<R>& a, const Poly<R>& b, const Poly<R>& m) {
  return (a * b) % m;
}

template <class R>
Poly<R> powmod(const Poly<R>& base, const mpz_class& e, const Poly<R>& m, const R& proto) {
  Poly<R> result = Poly<R>::constant(one_like(proto)) % m;
  Poly<R> b = base % m;
  const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    result = mulmod(result, result, m);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = mulmod(result, b, m);
  }
  return result;
}

template <class R>
std::ostream& operator<<(std::ostream& os, const Poly<R>& p) {
  os << "[";
  for (int i = 0; i <= p.degree(); ++i) os << (i ? ", " : "") << p[i];
  return os << "]";
}

}  // namespace hyperiso
