#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "hyperiso/g3_recovery.hpp"

using namespace hyperiso;
using namespace fixtures;

namespace {

Level2Family g3_family(uint64_t seed) {
  Curve C = g3_curve_C();
  Rng rng(seed);
  Divisor y = random_jacobian_point(C, rng);
  return Level2Family(C, enumerate_kernel(C, {5, g3_kernel()}), y, EtafOptions{});
}

TwoTorsionLabel node_label(int i) { return i < 7 ? TwoTorsionLabel::from_indices(3, {i + 1}) : TwoTorsionLabel{3, 0}; }

}  // namespace

TEST_CASE("genus-3 trope choice") {
  const auto inc = g3_incidence_labels();
  REQUIRE(inc.size() == 8u);
  for (int i = 0; i < 8; ++i) {
    int count = 0;
    for (const auto& a : inc) count += trope_contains(a, node_label(i)) ? 1 : 0;
    CHECK(count == 3);
    for (int j = 1; j <= 8; ++j) {
      const TwoTorsionLabel t = j < 8 ? TwoTorsionLabel::from_indices(3, {j}) : TwoTorsionLabel{3, 0};
      CHECK(trope_contains(t, node_label(i)));
    }
  }
  // For any three of the eight nodes some trope outside Z_a1..Z_a8 contains exactly those three.
  std::set<uint32_t> eight;
  for (int i = 0; i < 8; ++i) eight.insert(node_label(i).mask);
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b)
      for (int c = b + 1; c < 8; ++c) {
        bool found = false;
        for (const auto& t : all_labels(3)) {
          if (eight.count(t.mask)) continue;
          int in = 0;
          bool ok = true;
          for (int i = 0; i < 8; ++i) {
            const bool on = trope_contains(t, node_label(i));
            const bool want = i == a || i == b || i == c;
            if (on != want) ok = false;
            in += on ? 1 : 0;
          }
          found = found || (ok && in == 3);
        }
        CHECK(found);
      }
}

TEST_CASE("genus-3 curve recovery over F_120049") {
  Level2Family fam = g3_family(1);
  Rng rng(2);
  Genus3Recovery r = recover_genus3(fam, rng);
  CHECK(r.nodes.evaluations == 108);
  for (const auto& n : r.nodes.nodes) {
    int zeros = 0;
    for (const auto& [mask, t] : r.nodes.tropes) zeros += eval_trope(t, n.p).is_zero() ? 1 : 0;
    CHECK(zeros == 7);
  }
  // The eight nodes lie on all of Z_a1, ..., Z_a8.
  for (int j = 5; j <= 8; ++j) {
    const TwoTorsionLabel a = j < 8 ? TwoTorsionLabel::from_indices(3, {j}) : TwoTorsionLabel{3, 0};
    Trope t = g3_trope(fam, r.nodes.basis, a, rng);
    for (const auto& n : r.nodes.nodes) CHECK(eval_trope(t, n.p).is_zero());
  }
  CHECK(r.params_first.size() == 6u);
  CHECK(r.params_second.size() == 6u);
  REQUIRE(r.glued.values.size() == 8u);
  for (size_t i = 0; i < 8; ++i)
    for (size_t j = i + 1; j < 8; ++j) CHECK_FALSE(r.glued.values[i] == r.glued.values[j]);
  CHECK(r.D.f.degree() == 7);
  CHECK(hyperelliptic_isomorphic(r.D, g3_curve_D()));
  Curve other(F120049(), g3_curve_D().f + PolyF({Fq(F120049(), 1)}));
  CHECK_FALSE(hyperelliptic_isomorphic(r.D, other));

  // Other fixed pairs give Mobius-equivalent values.
  std::vector<Trope> four;
  for (const char* s : {"a1", "a2", "a3", "a4"}) four.push_back(r.nodes.tropes.at(TwoTorsionLabel::parse(3, s).mask));
  auto alt = parameterize_g3(four, r.nodes.nodes, {4, 5});
  std::map<size_t, P1Value> second(r.params_second);
  G3GlueResult g = glue_g3(alt, second);
  Curve D2 = curve_from_values(g.values, g3_curve_C().K);
  CHECK(hyperelliptic_isomorphic(D2, g3_curve_D()));
  CHECK_THROWS_AS(parameterize_g3(four, r.nodes.nodes, {3, 3}), std::invalid_argument);
}

TEST_CASE("genus-3 recovery is seed independent") {
  Level2Family fam = g3_family(5);
  Rng rng(6);
  Genus3Recovery r = recover_genus3(fam, rng);
  CHECK(hyperelliptic_isomorphic(r.D, g3_curve_D()));
}

TEST_CASE("genus-3 Kummer threefold has one quadric") {
  Level2Family fam = g3_family(1);
  Rng rng(2);
  G3Nodes n = nodes8_g3(fam, rng);
  std::vector<ProjPoint> pts;
  while (pts.size() < 40) {
    auto p = kummer_image(fam, n.basis, random_jacobian_point(fam.curve(), rng));
    if (p) pts.push_back(*p);
  }
  const auto quadrics = fit_kummer_equation(pts, 2);
  REQUIRE(quadrics.size() == 1u);
  const auto& q = quadrics[0];
  const auto mons = monomials(8, 2);
  for (const auto& node : n.nodes) {
    Fq acc(fam.curve().K, 0);
    for (size_t i = 0; i < mons.size(); ++i) acc = acc + q[i] * eval_monomial(mons[i], node.p);
    CHECK(acc.is_zero());
  }
}
