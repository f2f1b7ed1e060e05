#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "hyperiso/field.hpp"

namespace hyperiso {

struct ZeroConstantTerm : MathError {
  using MathError::MathError;
};
struct InsufficientPrecision : MathError {
  using MathError::MathError;
};

/// Truncated power series a_0 + a_1 t + ... known modulo t^prec, coefficients in one field level.
class Series {
 public:
  Series() = default;
  Series(const FieldCtx* F, int prec);
  static Series constant(const Fq& a, int prec);
  /// a + b t
  static Series linear(const Fq& a, const Fq& b, int prec);
  static Series from_coeffs(const FieldCtx* F, std::vector<Fq> c, int prec);

  const FieldCtx* field() const { return F_; }
  int prec() const { return static_cast<int>(c_.size()); }
  const Fq& operator[](int i) const { return c_[i]; }
  Fq coeff(int i) const;
  void set(int i, const Fq& a);
  const std::vector<Fq>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_unit() const { return !c_.empty() && !c_[0].is_zero(); }
  /// Index of the first nonzero coefficient, or prec() for the zero series.
  int valuation() const;

  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator-() const;
  Series operator*(const Series& o) const;
  Series operator/(const Series& o) const { return *this * o.inv(); }
  Series operator+(const Fq& a) const;
  Series operator-(const Fq& a) const;
  Series operator*(const Fq& a) const;
  Series& operator+=(const Series& o) { return *this = *this + o; }
  Series& operator-=(const Series& o) { return *this = *this - o; }
  Series& operator*=(const Series& o) { return *this = *this * o; }
  bool operator==(const Series& o) const;
  bool operator!=(const Series& o) const { return !(*this == o); }

  /// Inverse of a unit; throws NonUnit otherwise.
  Series inv() const;
  /// Quotient allowing a denominator of positive valuation k; the result loses k orders of precision.
  Series div_exact(const Series& d) const;
  /// Square root with the given constant term, or the canonical root of a_0 when absent.
  Series sqrt(const std::optional<Fq>& branch = std::nullopt) const;
  Series derivative() const;
  Series truncate(int prec) const;
  /// Multiply by t^k (k >= 0) keeping the precision.
  Series shift(int k) const;
  /// Divide by t^k, requires valuation >= k; precision drops by k.
  Series unshift(int k) const;
  Series lift_to(const FieldCtx* F) const;
  Series pow(uint64_t e) const;

  Series zero() const { return Series(F_, prec()); }
  Series one() const { return constant(Fq(F_, 1), prec()); }

 private:
  const FieldCtx* F_ = nullptr;
  std::vector<Fq> c_;
};

inline Series operator*(const Fq& a, const Series& s) { return s * a; }
inline Series operator+(const Fq& a, const Series& s) { return s + a; }
inline Series operator-(const Fq& a, const Series& s) { return -s + a; }

inline Series zero_like(const Series& s) { return s.zero(); }
inline Series one_like(const Series& s) { return s.one(); }
inline Series int_like(const Series& s, int64_t n) { return Series::constant(Fq(s.field(), n), s.prec()); }

std::ostream& operator<<(std::ostream& os, const Series& s);

}  // namespace hyperiso
