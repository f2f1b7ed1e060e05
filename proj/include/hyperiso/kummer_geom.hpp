#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperiso/kernel_etaf.hpp"

namespace hyperiso {

struct DegenerateIntersection : MathError {
  using MathError::MathError;
};
struct RankDeficient : MathError {
  using MathError::MathError;
};

/// 2-torsion class sum_{i in S} (r_i - o) with S a subset of {1, ..., 2g+1}, stored canonically (|S| <= g).
struct TwoTorsionLabel {
  int g = 2;
  uint32_t mask = 0;  // bit i-1 for r_i

  static TwoTorsionLabel from_indices(int g, const std::vector<int>& idx);
  /// Parses "a6", "a1", "a12", "a123" (a_{2g+2} is the zero class).
  static TwoTorsionLabel parse(int g, const std::string& s);
  std::string name() const;
  std::vector<int> indices() const;
  bool is_zero() const { return mask == 0; }
  TwoTorsionLabel operator+(const TwoTorsionLabel& o) const;
  bool operator==(const TwoTorsionLabel& o) const { return g == o.g && mask == o.mask; }
  bool operator<(const TwoTorsionLabel& o) const { return mask < o.mask; }
};

/// All 2^(2g) labels in a fixed order (zero first, then by size and indices).
std::vector<TwoTorsionLabel> all_labels(int g);
/// Weil pairing on 2-torsion: returns 1 for -1.
int weil_pairing2(const TwoTorsionLabel& a, const TwoTorsionLabel& b);

/// phi(a') lies on the trope Z_a (from the divisors of the level-2 functions).
bool trope_contains(const TwoTorsionLabel& a, const TwoTorsionLabel& node);

/// Label in matrix form (eps_1..eps_g | rho_1..rho_g) with respect to a symplectic basis.
struct SymplecticForm {
  std::array<int, 3> eps{}, rho{};
};
/// Symplectic basis e_1..e_g, f_1..f_g of J[2] found by a deterministic search.
std::vector<TwoTorsionLabel> symplectic_basis(int g);
SymplecticForm matrix_form(const TwoTorsionLabel& a, const std::vector<TwoTorsionLabel>& basis);
/// Two-column condition for phi(a') on Z_{a0 + a''} in genus 2.
bool incidence_g2(const SymplecticForm& a1, const SymplecticForm& a2);
/// Genus-3 condition; `a1_minus_a2_is_a0` supplies the hyperelliptic extra case.
bool incidence_g3(const SymplecticForm& a1, const SymplecticForm& a2, bool hyperelliptic, bool a1_minus_a2_is_a0);
/// The genus-2 (16,6) table: trope label -> its six node labels.
const std::vector<std::pair<std::string, std::array<std::string, 6>>>& table_16_6();
/// Verifies the derived incidence against the hard-coded table; throws std::logic_error on mismatch.
void check_configuration_table();

/// Weierstrass x-coordinates r_1..r_{2g+1} in canonical order; requires f to split over K.
std::vector<Fq> weierstrass_roots(const Curve& C);
Divisor label_divisor(const Curve& C, const TwoTorsionLabel& a);

/// Projective point, normalised with last nonzero coordinate 1.
using ProjPoint = std::vector<Fq>;
ProjPoint normalize_projective(ProjPoint p);

struct Trope {
  TwoTorsionLabel label;
  std::vector<Fq> c;  // Z_label = sum c_k Z_k
};
struct Node {
  TwoTorsionLabel label;
  ProjPoint p;
};

/// Family of level-2 eta_f functions sharing curve, kernel, base and phi_u, phi_y.
class Level2Family {
 public:
  Level2Family(const Curve& C, const KernelData& V, const Divisor& y, const EtafOptions& opt);
  const EtafContext& get(const TwoTorsionLabel& a);
  std::optional<Fq> eval(const TwoTorsionLabel& a, const Divisor& x);
  std::optional<Series> eval_formal(const TwoTorsionLabel& a, const SeriesDivisor& x);
  /// Number of eta_f evaluations performed through this family.
  int evaluations() const { return evals_; }
  const Curve& curve() const { return C_; }
  const Divisor& base() const { return y_; }
  const KernelData& kernel() const { return V_; }
  const EtafOptions& options() const { return opt_; }

 private:
  Curve C_;
  KernelData V_;
  Divisor y_;
  EtafOptions opt_;
  std::map<uint32_t, std::unique_ptr<EtafContext>> ctx_;
  int evals_ = 0;
};

/// Exact coefficients with target = sum c_k basis_k from values at sample points (rows).
std::vector<Fq> fit_trope(const std::vector<std::vector<Fq>>& basis_values, const std::vector<Fq>& target_values);
/// Trope of `target` over `basis`: (dim - 1) random samples plus the y row, verified at 2 held-out points.
Trope fit_trope(Level2Family& fam, const std::vector<TwoTorsionLabel>& basis, const TwoTorsionLabel& target, Rng& rng,
                int max_tries = 8);
/// Value of sum c_k Z_k at a projective point.
Fq eval_trope(const Trope& t, const ProjPoint& p);
/// a0 with incidence_g2/g3(node, a + a0) equivalent to trope_contains(a, node) for the given basis.
std::optional<TwoTorsionLabel> find_a0(int g, const std::vector<TwoTorsionLabel>& basis);

struct Algorithm1Result {
  std::vector<Trope> tropes;       // Z_a34, Z_a35, Z_a45 over the basis (a6, a1, a2, a12)
  std::array<Node, 6> nodes;       // phi(a1), ..., phi(a6)
  int evaluations = 0;
  Fq shift_constant;               // c = 1/eta_a35(y + a45)
  std::optional<Trope> z_a3;       // with_a3 only
  std::vector<Node> extra;         // with_a3 only: phi(a12), phi(a34), phi(a35)
};
/// Nodes phi(a_1..a_6) with 11 eta_f evaluations (13 with Z_a3 and the extra nodes);
/// retries with a fresh z on degenerate intersections.
Algorithm1Result nodes_algorithm1(Level2Family& fam, Rng& rng, bool with_a3 = false, int max_tries = 8);
/// Point of P^3 on three planes (rows of coefficients).
ProjPoint intersect_planes(const std::vector<std::vector<Fq>>& planes);

/// (Z_1(x) : ... : Z_n(x)) for the basis labels, or nullopt if an evaluation fails.
std::optional<ProjPoint> kummer_image(Level2Family& fam, const std::vector<TwoTorsionLabel>& basis, const Divisor& x);

/// Monomials of degree d in n variables, lexicographic from the highest power of Z_1.
std::vector<std::vector<int>> monomials(int n, int d);
Fq eval_monomial(const std::vector<int>& m, const ProjPoint& p);
/// Null space of the evaluation matrix of degree-d monomials at points (each row a point).
std::vector<std::vector<Fq>> fit_kummer_equation(const std::vector<ProjPoint>& pts, int degree);

}  // namespace hyperiso
