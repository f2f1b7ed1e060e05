#include "hyperiso/series.hpp"

#include <algorithm>

namespace hyperiso {

namespace {
const FieldCtx* unify(const FieldCtx* a, const FieldCtx* b) {
  if (a == b) return a;
  const FieldCtx* c = common_field(a, b);
  if (!c) throw FieldMismatch("series over incomparable field levels");
  return c;
}
}  // namespace

Series::Series(const FieldCtx* F, int prec) : F_(F), c_(std::max(prec, 0), Fq(F, 0)) {}

Series Series::constant(const Fq& a, int prec) {
  Series s(a.field(), prec);
  if (prec > 0) s.c_[0] = a;
  return s;
}

Series Series::linear(const Fq& a, const Fq& b, int prec) {
  const FieldCtx* F = unify(a.field(), b.field());
  Series s(F, prec);
  if (prec > 0) s.c_[0] = a.lift_to(F);
  if (prec > 1) s.c_[1] = b.lift_to(F);
  return s;
}

Series Series::from_coeffs(const FieldCtx* F, std::vector<Fq> c, int prec) {
  Series s(F, prec);
  for (int i = 0; i < prec && i < static_cast<int>(c.size()); ++i) s.c_[i] = c[i].lift_to(F);
  return s;
}

Fq Series::coeff(int i) const {
  if (i < 0) return Fq(F_, 0);
  if (i >= prec()) throw InsufficientPrecision("coefficient beyond known precision");
  return c_[i];
}

void Series::set(int i, const Fq& a) { c_.at(i) = a.lift_to(F_); }

bool Series::is_zero() const {
  for (const auto& a : c_)
    if (!a.is_zero()) return false;
  return true;
}

int Series::valuation() const {
  for (int i = 0; i < prec(); ++i)
    if (!c_[i].is_zero()) return i;
  return prec();
}

Series Series::operator+(const Series& o) const {
  const FieldCtx* F = unify(F_, o.F_);
  const int n = std::min(prec(), o.prec());
  Series r(F, n);
  for (int i = 0; i < n; ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;
}

Series Series::operator-(const Series& o) const {
  const FieldCtx* F = unify(F_, o.F_);
  const int n = std::min(prec(), o.prec());
  Series r(F, n);
  for (int i = 0; i < n; ++i) r.c_[i] = c_[i] - o.c_[i];
  return r;
}

Series Series::operator-() const {
  Series r(*this);
  for (auto& a : r.c_) a = -a;
  return r;
}

Series Series::operator*(const Series& o) const {
  const FieldCtx* F = unify(F_, o.F_);
  const int n = std::min(prec(), o.prec());
  Series r(F, n);
  for (int i = 0; i < n; ++i) {
    if (c_[i].is_zero()) continue;
    for (int j = 0; i + j < n; ++j) r.c_[i + j] += c_[i] * o.c_[j];
  }
  return r;
}

Series Series::operator+(const Fq& a) const {
  Series r = F_ == a.field() ? *this : lift_to(unify(F_, a.field()));
  if (r.prec() > 0) r.c_[0] += a;
  return r;
}

Series Series::operator-(const Fq& a) const { return *this + (-a); }

Series Series::operator*(const Fq& a) const {
  const FieldCtx* F = unify(F_, a.field());
  Series r(F, prec());
  for (int i = 0; i < prec(); ++i) r.c_[i] = c_[i] * a;
  return r;
}

bool Series::operator==(const Series& o) const {
  const int n = std::min(prec(), o.prec());
  for (int i = 0; i < n; ++i)
    if (c_[i] != o.c_[i]) return false;
  return true;
}

Series Series::inv() const {
  if (!is_unit()) throw NonUnit("series with zero constant term is not invertible");
  const int n = prec();
  Series r(F_, n);
  const Fq i0 = c_[0].inv();
  r.c_[0] = i0;
  for (int k = 1; k < n; ++k) {
    Fq acc(F_, 0);
    for (int j = 1; j <= k; ++j) acc += c_[j] * r.c_[k - j];
    r.c_[k] = -acc * i0;
  }
  return r;
}

Series Series::div_exact(const Series& d) const {
  const int k = d.valuation();
  if (k >= d.prec()) throw NonUnit("division by a series that vanishes to its precision");
  if (k == 0) return *this / d;
  const int n = std::min(prec(), d.prec());
  for (int i = 0; i < k && i < n; ++i)
    if (!c_[i].is_zero()) throw NonUnit("numerator valuation below denominator valuation");
  Series a = truncate(n).unshift(k);
  Series b = d.truncate(n).unshift(k);
  return a / b;
}

Series Series::sqrt(const std::optional<Fq>& branch) const {
  if (prec() == 0) return *this;
  if (c_[0].is_zero()) throw ZeroConstantTerm("series square root needs a nonzero constant term");
  Fq r0;
  if (branch) {
    r0 = branch->lift_to(unify(F_, branch->field()));
    if (r0 * r0 != c_[0]) throw MathError("square-root branch does not square to the constant term");
  } else {
    auto r = c_[0].sqrt();
    if (!r) throw NonResidue("constant term is not a square");
    r0 = *r;
  }
  const FieldCtx* F = r0.field();
  Series s = lift_to(F);
  const int n = prec();
  Series y(F, n);
  y.c_[0] = r0;
  const Fq inv2r = (r0 + r0).inv();
  for (int k = 1; k < n; ++k) {
    Fq acc = s.c_[k];
    for (int j = 1; j < k; ++j) acc -= y.c_[j] * y.c_[k - j];
    y.c_[k] = acc * inv2r;
  }
  return y;
}

Series Series::derivative() const {
  if (prec() == 0) return *this;
  Series r(F_, prec() - 1);
  for (int i = 1; i < prec(); ++i) r.c_[i - 1] = c_[i] * Fq(F_, i);
  return r;
}

Series Series::truncate(int n) const {
  Series r(F_, std::min(n, prec()));
  for (int i = 0; i < r.prec(); ++i) r.c_[i] = c_[i];
  return r;
}

Series Series::shift(int k) const {
  Series r(F_, prec());
  for (int i = 0; i + k < prec(); ++i) r.c_[i + k] = c_[i];
  return r;
}

Series Series::unshift(int k) const {
  if (valuation() < k) throw NonUnit("cannot divide by t^k");
  Series r(F_, std::max(prec() - k, 0));
  for (int i = 0; i < r.prec(); ++i) r.c_[i] = c_[i + k];
  return r;
}

Series Series::lift_to(const FieldCtx* F) const {
  if (F == F_) return *this;
  Series r(F, prec());
  for (int i = 0; i < prec(); ++i) r.c_[i] = c_[i].lift_to(F);
  return r;
}

Series Series::pow(uint64_t e) const {
  Series r = one(), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

std::ostream& operator<<(std::ostream& os, const Series& s) {
  os << "{";
  for (int i = 0; i < s.prec(); ++i) os << (i ? ", " : "") << s[i];
  return os << " + O(t^" << s.prec() << ")}";
}

}  // namespace hyperiso
