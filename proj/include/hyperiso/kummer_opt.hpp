#pragma once

#include <array>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hyperiso/kummer_geom.hpp"

namespace hyperiso {

struct NotOnSurface : MathError {
  using MathError::MathError;
};
struct LiftFailure : MathError {
  using MathError::MathError;
};
struct NoAssignment : MathError {
  using MathError::MathError;
};
struct SignAmbiguity : MathError {
  using MathError::MathError;
};

using SeriesPoint = std::vector<Series>;

/// Kummer surface K2 e4^2 + K1 e4 + K0 = 0 of Y^2 = c0 + ... + c5 X^5.
class KummerOpt {
 public:
  explicit KummerOpt(const Curve& D);
  const Curve& curve() const { return D_; }

  Fq quartic(const ProjPoint& e) const;
  Series quartic(const SeriesPoint& e) const;
  /// (1 : x1 + x2 : x1 x2 : beta0), (0 : 1 : x1 : c5 x1^2) or (0 : 0 : 0 : 1).
  ProjPoint embed(const Divisor& x) const;
  SeriesPoint embed(const SeriesDivisor& x) const;
  /// One of the two preimages (the other is its negative); NonResidue when it is not defined over the field.
  Divisor lift(const ProjPoint& e) const;
  SeriesDivisor lift(const SeriesPoint& e) const;

  /// Nodes of all 16 classes, labelled over the Weierstrass roots of D; needs D to split over K.
  std::vector<std::pair<TwoTorsionLabel, ProjPoint>> two_torsion_nodes() const;

  /// Image of +-(A - B) from the images of +-A, +-B and +-(A + B).
  SeriesPoint pseudo_diff(const SeriesPoint& pA, const SeriesPoint& pB, const SeriesPoint& pAB) const;
  /// The same, returning a Jacobian lift of +-(A - B).
  SeriesDivisor pseudo_diff_lift(const SeriesPoint& pA, const SeriesPoint& pB, const SeriesPoint& pAB) const;
  ProjPoint pseudo_diff(const ProjPoint& pA, const ProjPoint& pB, const ProjPoint& pAB) const;

 private:
  Curve D_;
  std::array<Fq, 6> c_;
};

/// Projective equality (all 2x2 minors vanish).
bool proj_equal(const ProjPoint& a, const ProjPoint& b);
bool proj_equal(const SeriesPoint& a, const SeriesPoint& b);

/// S = M Z with M[0][3] = M[1][3] = M[2][3] = 0 and M[3][3] = 1.
struct ChangeOfVariables {
  Matrix M;
  std::map<uint32_t, TwoTorsionLabel> assignment;  // C-label mask -> D-label
  ProjPoint apply(const ProjPoint& z) const;
  SeriesPoint apply(const SeriesPoint& z) const;
};

/// Sends the kappa_D nodes (labels a6, a3, a4, a5, a12, a34, a35, checked on a1, a2) onto opt nodes,
/// respecting the group structure; optional samples must land on the opt quartic.
ChangeOfVariables find_change_of_variables(const std::map<uint32_t, ProjPoint>& kd_nodes, const KummerOpt& opt,
                                           const std::vector<ProjPoint>& samples = {});

}  // namespace hyperiso
