#pragma once

#include <array>
#include <optional>
#include <vector>

#include "hyperiso/kummer_geom.hpp"

namespace hyperiso {

struct DegenerateConic : MathError {
  using MathError::MathError;
};
struct NoConsistentMap : MathError {
  using MathError::MathError;
};
struct DuplicateRoot : MathError {
  using MathError::MathError;
};
struct Ambiguous : MathError {
  using MathError::MathError;
};
struct Unresolvable : MathError {
  using MathError::MathError;
};

/// Point of P^1: a value of K or infinity (nullopt).
using P1Value = std::optional<Fq>;

/// Pencil E = Z_i + x Z_j (after eliminating one coordinate) through the fixed node inside the trope;
/// returns x at each non-fixed node, in input order.
std::vector<P1Value> parameterize_trope(const Trope& trope, const std::vector<ProjPoint>& nodes, size_t fixed);

/// x -> (a x + b) / (c x + d).
struct Mobius {
  Fq a, b, c, d;
  P1Value operator()(const P1Value& x) const;
  /// Through three distinct correspondences.
  static std::optional<Mobius> from_points(const std::array<P1Value, 3>& from, const std::array<P1Value, 3>& to);
};

struct GlueResult {
  std::vector<P1Value> values;  // the second set completed to 6 values
  Mobius map;                   // sends 4 values of the first set into the second
  size_t unmatched = 0;         // index in the first set of the value mapped to the new sixth value
};
GlueResult glue_models(const std::vector<P1Value>& first, const std::vector<P1Value>& second);

/// Y^2 = prod (X - v) over the finite values; a Mobius change moves a finite value to infinity if none is.
Curve curve_from_values(const std::vector<P1Value>& values, const FieldCtx* K);
/// Monic model of the quadratic twist by the least non-residue.
Curve quadratic_twist(const Curve& C);
/// The candidate among {D, twist of D} whose Jacobian order is `order`.
Curve resolve_twist(const Curve& D, const mpz_class& order);

/// Igusa-Clebsch invariants (I2, I4, I6, I10) of a genus-2 curve; needs p > 5.
std::array<Fq, 4> igusa_clebsch(const Curve& C);
/// Equality in weighted projective space with weights (1, 2, 3, 5).
bool igusa_equivalent(const std::array<Fq, 4>& a, const std::array<Fq, 4>& b);
/// Geometric isomorphism of hyperelliptic curves by matching branch points under a Mobius map.
bool hyperelliptic_isomorphic(const Curve& C1, const Curve& C2);

struct Genus2Recovery {
  Algorithm1Result nodes;
  std::vector<P1Value> params_a6, params_a1;  // pencils through phi(a6) and phi(a1)
  GlueResult glued;
  Curve D;  // twist unresolved
};
/// Isogenous curve from the level-2 family: Algorithm 1, two parameterizations and gluing.
Genus2Recovery recover_genus2(Level2Family& fam, Rng& rng, bool with_a3 = false);

}  // namespace hyperiso
