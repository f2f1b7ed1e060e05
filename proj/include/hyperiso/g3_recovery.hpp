#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "hyperiso/curve_recovery.hpp"

namespace hyperiso {

struct DegeneratePencil : MathError {
  using MathError::MathError;
};

/// Tropes Z_{a24}, Z_{a37}, Z_{a67}, Z_{a123}, Z_{a145}, Z_{a167}, Z_{a256}, Z_{a345} and Z_{a1}, ..., Z_{a4}.
std::vector<TwoTorsionLabel> g3_trope_labels();
/// The eight tropes among them that each contain exactly three of phi(a_1), ..., phi(a_8).
std::vector<TwoTorsionLabel> g3_incidence_labels();

struct G3Nodes {
  std::vector<TwoTorsionLabel> basis;     // labels of Z_1, ..., Z_8
  std::map<uint32_t, Trope> tropes;       // the twelve tropes over the basis
  std::array<Node, 8> nodes;              // phi(a_1), ..., phi(a_8), a_8 = 0
  int evaluations = 0;
};

/// phi(a_1..a_8) in P^7 from the twelve tropes; 8 of them are basis coordinates, the other 4 are fitted.
G3Nodes nodes8_g3(Level2Family& fam, Rng& rng, int max_tries = 8);
/// Trope of the given label over the basis: a coordinate if the label is in the basis, else fitted.
Trope g3_trope(Level2Family& fam, const std::vector<TwoTorsionLabel>& basis, const TwoTorsionLabel& a, Rng& rng);

/// Pencil of planes through two fixed nodes inside {Z_a1 = ... = Z_a4 = 0}; value of each other node, keyed by node index.
std::map<size_t, P1Value> parameterize_g3(const std::vector<Trope>& four, const std::array<Node, 8>& nodes,
                                          std::pair<size_t, size_t> fixed);

struct G3GlueResult {
  std::vector<P1Value> values;  // eight values indexed by node, in the coordinate of the second parameterization
  Mobius map;                   // first coordinate -> second coordinate
};
/// Mobius map on shared nodes (three to solve, all to validate) completing the second set to eight values.
G3GlueResult glue_g3(const std::map<size_t, P1Value>& first, const std::map<size_t, P1Value>& second);

struct Genus3Recovery {
  G3Nodes nodes;
  std::map<size_t, P1Value> params_first, params_second;
  G3GlueResult glued;
  Curve D;  // degree-7 model, twist unresolved
};
/// Genus-3 hyperelliptic isogenous curve; fixed pairs default to (phi(a_8), phi(a_1)) and (phi(a_2), phi(a_3)).
Genus3Recovery recover_genus3(Level2Family& fam, Rng& rng, std::pair<size_t, size_t> first = {7, 0},
                              std::pair<size_t, size_t> second = {1, 2});

}  // namespace hyperiso
