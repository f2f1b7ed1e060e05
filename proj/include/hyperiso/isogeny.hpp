#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperiso/curve_recovery.hpp"
#include "hyperiso/fraction.hpp"
#include "hyperiso/kummer_opt.hpp"
#include "hyperiso/linalg.hpp"

namespace hyperiso {

struct DegreeOverflow : MathError {
  using MathError::MathError;
};
struct SingularStep : MathError {
  using MathError::MathError;
};

/// F(u, v) = <X^2 - S X + P, v (Q X + R)> in genus 2, <X^3 - S X^2 + P X - A, v (R X^2 - T X + E)> in genus 3.
struct IsogenyFractions {
  int genus = 2;
  std::vector<std::pair<PolyF, PolyF>> parts;  // (numerator, denominator): S, P, Q, R or S, P, A, R, T, E

  /// Image of (u, v) - O; nullopt at a pole or a vanishing denominator.
  std::optional<Divisor> image(const Point& P) const;
  static const std::vector<std::string>& names(int genus);
};

/// Degree bounds 2 ell, 2 ell, 3 ell + 3, 3 ell + 3 for the genus-2 parts.
std::vector<int> degree_bounds_g2(int ell);

/// Parses sums of terms c, c*u, c u^k (any single variable letter) over F.
PolyF parse_polynomial(const FieldCtx* F, const std::string& text);

struct FormalImage {
  Point base;              // (u0, v0) on C
  SeriesDivisor point;     // P(t) - O with u(t) = u0 + t
  SeriesDivisor image;     // F(P(t)) on D
  int evaluations = 0;     // eta_f evaluations spent
};

/// F(P(t)) from the Kummer images of m P(t), (m + 1) P(t), (2m + 1) P(t) over the basis,
/// moved to the Kummer model of D and pseudo-subtracted.
FormalImage formal_image(Level2Family& fam, const std::vector<TwoTorsionLabel>& basis, const ChangeOfVariables& cv,
                         const KummerOpt& opt, const Point& base, int prec, int m = 2);

/// Formal points Q_j(t) = (x_j(t), y_j(t)) with F(P(t)) = sum Q_j(t) - g O.
struct FormalState {
  int g = 2;
  PolyF hC, hD;
  Fq u0, v0;
  const FieldCtx* K = nullptr;  // base field
  const FieldCtx* L = nullptr;  // field of the x_j(0)
  std::vector<Series> x, y;
  Matrix m;  // m[k][i]: coefficient of u^k in the pullback of the i-th differential
  int prec() const { return x.empty() ? 0 : x[0].prec(); }
};

/// Splits the image into its g formal points by Hensel lifting; SpecialPoint on repeated or Weierstrass support.
FormalState decompose_image(const Curve& C, const Curve& D, const FormalImage& im);
/// Solves the degree 0..g-1 coefficients of the differential system for the pullback matrix.
Matrix solve_pullback_matrix(FormalState& st);
/// Extends the x_j, y_j to precision N one degree at a time.
void extend_precision(FormalState& st, int N);
/// Residual of the first line of the differential system, as series known to precision prec() - 1.
std::vector<Series> differential_residual(const FormalState& st);
/// Precision 2 (3 ell + 4) + margin used for reconstruction.
int reconstruction_precision(int ell, int margin = 4);
/// Continued-fraction reconstruction in t, moved to the curve coordinate u = u0 + t.
IsogenyFractions reconstruct(const FormalState& st, const std::vector<int>& bounds);

struct VerifyReport {
  int validity_ok = 0, validity_fail = 0;
  int homomorphism_ok = 0, homomorphism_fail = 0;
  int kernel_ok = 0, kernel_fail = 0;
  int skipped = 0;
  std::vector<std::string> failures;
  bool passed() const {
    return validity_fail == 0 && homomorphism_fail == 0 && kernel_fail == 0 && validity_ok > 0 && kernel_ok > 0;
  }
};

/// Mumford validity at random points, additivity on reduced sums of g + 1 points,
/// and annihilation of each kernel generator through its support points.
VerifyReport verify_isogeny(const Curve& C, const Curve& D, const IsogenyFractions& fr,
                            const std::vector<Divisor>& kernel_generators, int samples, Rng& rng);

struct IsogenyOptions {
  int m = 2;
  int max_base_tries = 8;
  int precision_margin = 4;
};

struct Genus2Isogeny {
  Genus2Recovery recovery;
  Curve D;  // twist resolved
  ChangeOfVariables cv;
  FormalImage formal;
  Matrix pullback;
  IsogenyFractions fractions;
};

/// Curve recovery, twist resolution by rationality of the lifted formal image, and the rational fractions.
Genus2Isogeny compute_isogeny_g2(Level2Family& fam, int ell, Rng& rng, const IsogenyOptions& opt = {});

}  // namespace hyperiso
