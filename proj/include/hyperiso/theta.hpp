#pragma once

#include <array>
#include <map>
#include <vector>

#include "hyperiso/curve_recovery.hpp"
#include "hyperiso/linalg.hpp"

namespace hyperiso {

struct ZeroDenominator : MathError {
  using MathError::MathError;
};
struct RelationViolation : MathError {
  using MathError::MathError;
};

/// Half-integer characteristic [m/2; n/2] with m, n in {0,1}^g.
struct Characteristic {
  int g = 2;
  std::array<int, 3> m{}, n{};

  int parity() const;
  /// n_0 + 2 n_1 (+ 4 n_2) + 2^g (m_0 + 2 m_1 (+ 4 m_2)).
  int dupont() const;
  static Characteristic from_dupont(int g, int index);
  bool operator==(const Characteristic& o) const { return g == o.g && m == o.m && n == o.n; }
};
/// All 4^g characteristics by increasing index.
std::vector<Characteristic> all_characteristics(int g);
/// Characteristic of a 2-torsion label: m = eps, n = rho in the given symplectic basis.
Characteristic characteristic_of(const TwoTorsionLabel& a, const std::vector<TwoTorsionLabel>& basis);

/// Every trope and node of the level-2 configuration over one coordinate basis.
struct LevelTwoConfiguration {
  int g = 2;
  std::vector<TwoTorsionLabel> basis;
  std::map<uint32_t, Trope> tropes;
  std::map<uint32_t, ProjPoint> nodes;
  int evaluations = 0;
};
/// All 4^g tropes fitted on shared samples, nodes from the tropes through them.
/// An empty basis picks the first independent labels, the zero label first.
LevelTwoConfiguration full_configuration(Level2Family& fam, Rng& rng, std::vector<TwoTorsionLabel> basis = {},
                                         int max_tries = 8);

/// a0 + (1 ... 1 | 1 ... 1): the node playing the role of z = 0.
TwoTorsionLabel theta_origin(const TwoTorsionLabel& a0, const std::vector<TwoTorsionLabel>& basis);
/// The node lying on every trope of odd characteristic.
TwoTorsionLabel origin_from_odd_tropes(const LevelTwoConfiguration& conf, const std::vector<TwoTorsionLabel>& sym);

/// Stage 1: fourth powers theta_i^4/theta_0^4 by Dupont index. Stage 2: signed squares theta_i^2/theta_0^2.
struct ThetaSquares {
  int g = 2;
  std::map<int, Fq> fourth;
  std::map<int, Fq> squared;
};
struct ThetaConstants {
  ThetaSquares squares;
  std::map<int, Fq> c;  // c_a = eta_a(z) eta_a(z + a) for even a
  TwoTorsionLabel origin;
};
/// c_a and theta_i^4/theta_0^4 = eta_a(z)^2 / c_a from tropes evaluated at the nodes, z the origin node.
ThetaConstants c_constants(const LevelTwoConfiguration& conf, const TwoTorsionLabel& a0,
                           const std::vector<TwoTorsionLabel>& sym);
/// Number of even characteristics with vanishing stage-1 value.
int vanishing_even_constants(const ThetaSquares& s);
/// Stage 2 from canonical square roots; throws NonResidue if some value is not a square.
ThetaSquares with_canonical_squares(ThetaSquares s);

struct RosenhainResult {
  std::array<Fq, 3> r;
  Curve curve;  // Y^2 = X(X - 1)(X - r1)(X - r2)(X - r3)
};
/// Signs fixed by (t4 t6)^2 = (t0 t2)^2 - (t1 t3)^2, (t4 t9)^2 = (t1 t12)^2 - (t2 t15)^2 and the product r1 r2 r3.
RosenhainResult rosenhain(const ThetaSquares& s);
/// The triples from all sign choices of theta0^2/theta3^2, theta1^2/theta2^2, theta12^2/theta15^2,
/// over K or a quadratic extension when a root is missing.
std::vector<std::array<Fq, 3>> rosenhain_sign_candidates(const ThetaSquares& s);

/// sum_k sign_k prod theta_{i} = 0 over three products of four constants.
struct RiemannRelation {
  std::array<int, 3> sign;
  std::array<std::array<int, 4>, 3> idx;
};
/// The six genus-3 relations used to fix the signs of the Aronhold rows.
const std::vector<RiemannRelation>& aronhold_relations();
/// Sign-free residual X^2 + Y^2 + Z^2 - 2XY - 2YZ - 2ZX in the squared constants.
Fq relation_residual(const RiemannRelation& r, const std::map<int, Fq>& squared);
/// Rows (alpha_i1 : alpha_i2 : alpha_i3) from signed squares theta_i^2/theta_0^2, scaled to alpha_i1 = 1.
Matrix aronhold_alphas(const std::map<int, Fq>& squared);
/// The same rows from first powers theta_i directly.
Matrix aronhold_alphas_direct(const std::map<int, Fq>& theta);

/// Homogeneous form in x1, x2, x3.
struct TernaryForm {
  int degree = 0;
  std::map<std::array<int, 3>, Fq> coeffs;

  Fq eval(const std::array<Fq, 3>& x) const;
  bool is_zero() const;
  /// Same form up to a nonzero scalar.
  bool proportional(const TernaryForm& o) const;
  TernaryForm permuted(const std::array<int, 3>& sigma) const;
};
/// x1 = 0, x2 = 0, x3 = 0, x1 + x2 + x3 = 0 and the three alpha rows.
std::vector<std::array<Fq, 3>> aronhold_lines(const Matrix& alpha);
/// Plane quartic (x1 xi1 + x2 xi2 - x3 xi3)^2 - 4 x1 xi1 x2 xi2 with xi linear in x.
TernaryForm riemann_reconstruct(const Matrix& alpha);
/// The restriction of the form to the line is a square of a binary quadratic.
bool is_bitangent(const TernaryForm& F, const std::array<Fq, 3>& line);

}  // namespace hyperiso
