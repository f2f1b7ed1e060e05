#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hyperiso/rr.hpp"

namespace hyperiso {

struct BadBasePoint : MathError {
  using MathError::MathError;
};
struct EvaluationFailed : MathError {
  using MathError::MathError;
};

/// Zero-cycle sum e_i [u_i] on the Jacobian.
struct Cycle {
  std::vector<std::pair<Divisor, int64_t>> terms;
  Cycle& add(const Divisor& u, int64_t e) {
    terms.push_back({u, e});
    return *this;
  }
};

Divisor cycle_sum(const Curve& C, const Cycle& c);
int64_t cycle_degree(const Cycle& c);
/// c - [s(c)] - (deg c - 1)[0], merged by class, zero classes and zero exponents dropped.
Cycle normalize_cycle(const Curve& C, const Cycle& c);

using SeriesDivisor = MumfordT<Series>;

/// Precomputed data for eta[u, y] with fixed representative divisors.
class EtaContext {
 public:
  EtaContext(const Curve& C, const Cycle& cycle, const Divisor& y);
  /// Context without base point: eval returns the unnormalised value E(x).
  static EtaContext unnormalized(const Curve& C, const Cycle& cycle);

  const Curve& curve() const { return C_; }
  const Divisor& base() const { return y_; }
  const Cycle& cycle() const { return cycle_; }

  /// eta[u, y](x), or nullopt when x meets the support of an auxiliary function.
  std::optional<Fq> eval(const Divisor& x) const;
  Fq eval_or_throw(const Divisor& x) const;
  /// Value at a divisor over K[[t]].
  Series eval_formal(const SeriesDivisor& x) const;

  /// Unnormalised value E(x) with eta = E(x)/E(y), as numerator and denominator.
  std::optional<RingFraction<Fq>> raw(const Divisor& x) const;
  /// Denominator may have positive valuation.
  std::optional<RingFraction<Series>> raw_formal(const SeriesDivisor& x) const;
  /// E(x) as a single value; falls back to a formal deformation when a factor degenerates.
  std::optional<Fq> raw_value(const Divisor& x) const;

  struct Term {
    EffectiveDivisor D;
    RRBasis basis;
    int64_t e;
  };
  const std::vector<Term>& terms() const { return terms_; }
  const FactoredFunction& h() const { return h_; }

 private:
  EtaContext(const Curve& C, const Cycle& cycle);
  void build(const std::vector<Point>& avoid);

  Curve C_;
  Cycle cycle_;
  Divisor y_;
  std::vector<Term> terms_;
  FactoredFunction h_;
  Fq Ey_;
};

std::optional<Fq> eta_eval(const Curve& C, const Cycle& cycle, const Divisor& y, const Divisor& x);
std::vector<std::optional<Fq>> eta_batch(const EtaContext& ctx, const std::vector<Divisor>& xs);

/// eta[u, base](x) through pointwise determinants over splitting fields; reference implementation.
std::optional<Fq> eta_eval_pointwise(const EtaContext& ctx, const Divisor& x, const Divisor* base = nullptr);

/// Constant series c at precision prec.
SeriesDivisor constant_series_divisor(const Divisor& D, int prec, const FieldCtx* F);
Poly<Series> series_poly(const PolyF& p, int prec, const FieldCtx* F);
/// Moves each support point X_j to x_j + (j+1) t; needs distinct non-Weierstrass support points.
std::optional<SeriesDivisor> deform_divisor(const Curve& C, const Divisor& D, int prec, const FieldCtx** L);
/// Smallest coefficient precision of a series divisor.
int series_divisor_prec(const SeriesDivisor& D);
SeriesDivisor lift_series_divisor(const SeriesDivisor& D, const FieldCtx* F);
/// x - w over K[[t]], with w constant.
SeriesDivisor series_sub(const Curve& C, const SeriesDivisor& x, const Divisor& w);
SeriesDivisor series_add(const Curve& C, const SeriesDivisor& x, const SeriesDivisor& y);
SeriesDivisor series_scalar_mul(const Curve& C, int64_t n, const SeriesDivisor& x);
/// Field level of the coefficients.
const FieldCtx* series_divisor_field(const SeriesDivisor& D);
/// Value at t = 0 of the divisor.
Divisor series_divisor_at_zero(const SeriesDivisor& D);

}  // namespace hyperiso
