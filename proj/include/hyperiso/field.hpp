#pragma once

#include <array>
#include <cstdint>
#include <gmpxx.h>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperiso/rng.hpp"

namespace hyperiso {

/// Largest absolute degree over F_p supported for a field level.
constexpr int kMaxDegree = 12;

struct MathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonResidue : MathError {
  using MathError::MathError;
};
struct NonUnit : MathError {
  using MathError::MathError;
};
struct FieldMismatch : MathError {
  using MathError::MathError;
};
struct NotASubfield : MathError {
  using MathError::MathError;
};

class Fq;

/// One level of a tower of finite fields, stored as an absolute extension F_p[z]/(m).
struct FieldCtx {
  uint64_t p = 0;
  int degree = 1;                       // absolute degree over F_p
  std::vector<uint64_t> modulus;        // monic, ascending, size degree+1
  const FieldCtx* parent = nullptr;     // previous tower level (null for F_p)
  int relative_degree = 1;              // [this : parent]
  std::vector<std::vector<uint64_t>> parent_basis;  // images of parent's z^i
  std::vector<uint64_t> tower_gen;      // image of the relative generator
  std::string name;
  mpz_class order;                      // p^degree

  bool is_prime() const { return degree == 1; }
  bool is_ancestor_of(const FieldCtx* other) const;

  /// Express an element of this level in the parent's coordinates, if it lies there.
  std::optional<std::vector<uint64_t>> descend_coords(const std::vector<uint64_t>& c) const;
};

/// Returns the cached prime field F_p (p odd prime, p < 2^62).
const FieldCtx* prime_field(uint64_t p);

/// Builds base[z]/(poly) for a monic irreducible poly over base and flattens it to an absolute extension.
const FieldCtx* extend_field(const FieldCtx* base, const std::vector<Fq>& monic_poly, const std::string& name = "");

/// Absolute extension F_p[z]/(modulus) with F_p as parent.
const FieldCtx* absolute_field(uint64_t p, const std::vector<uint64_t>& monic_modulus, const std::string& name = "");

/// Smallest common level of two fields in the same tower chain, or null.
const FieldCtx* common_field(const FieldCtx* a, const FieldCtx* b);

bool is_probable_prime(uint64_t n);

class Fq {
 public:
  Fq() = default;
  Fq(const FieldCtx* F, int64_t n);
  static Fq from_coords(const FieldCtx* F, const std::vector<uint64_t>& coords);
  static Fq generator(const FieldCtx* F);

  const FieldCtx* field() const { return F_; }
  uint64_t coord(int i) const { return c_[i]; }
  std::vector<uint64_t> coords() const;
  bool valid() const { return F_ != nullptr; }

  bool is_zero() const;
  bool is_one() const;
  bool is_unit() const { return !is_zero(); }

  Fq operator+(const Fq& o) const;
  Fq operator-(const Fq& o) const;
  Fq operator*(const Fq& o) const;
  Fq operator/(const Fq& o) const { return *this * o.inv(); }
  Fq operator-() const;
  Fq& operator+=(const Fq& o) { return *this = *this + o; }
  Fq& operator-=(const Fq& o) { return *this = *this - o; }
  Fq& operator*=(const Fq& o) { return *this = *this * o; }
  Fq& operator/=(const Fq& o) { return *this = *this / o; }
  bool operator==(const Fq& o) const;
  bool operator!=(const Fq& o) const { return !(*this == o); }

  Fq inv() const;
  Fq pow(const mpz_class& e) const;
  Fq pow(uint64_t e) const;
  Fq frobenius() const { return pow(F_->p); }

  /// Coerce into a level containing this one.
  Fq lift_to(const FieldCtx* target) const;
  /// Coerce into a sublevel; throws NotASubfield when impossible.
  Fq descend_to(const FieldCtx* target) const;

  Fq norm_to_prime() const;
  bool is_square() const;
  /// Canonical square root; nullopt for non-residues.
  std::optional<Fq> sqrt() const;
  /// Canonical ordering key: the coordinate vector compared lexicographically.
  bool canonical_less(const Fq& o) const;
  /// True when the first nonzero coordinate lies in {1,...,(p-1)/2} or the element is zero.
  bool is_canonical_sign() const;

  Fq zero() const { return Fq(F_, 0); }
  Fq one() const { return Fq(F_, 1); }

  friend std::ostream& operator<<(std::ostream& os, const Fq& a);

 private:
  const FieldCtx* F_ = nullptr;
  std::array<uint64_t, kMaxDegree> c_{};
  friend Fq unify_lift(const Fq&, const FieldCtx*);
};

/// Relative trace from a's level down to sub.
Fq trace_to(const Fq& a, const FieldCtx* sub);
/// Absolute trace via the multiplication matrix.
Fq matrix_trace(const Fq& a);

Fq random_element(const FieldCtx* F, Rng& rng);

inline Fq zero_like(const Fq& a) { return a.zero(); }
inline Fq one_like(const Fq& a) { return a.one(); }
inline Fq int_like(const Fq& a, int64_t n) { return Fq(a.field(), n); }

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t p);
uint64_t invmod(uint64_t a, uint64_t p);

}  // namespace hyperiso
