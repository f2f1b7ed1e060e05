#include "hyperiso/g3_recovery.hpp"

#include <algorithm>

#include "hyperiso/linalg.hpp"

namespace hyperiso {

namespace {

TwoTorsionLabel L3(const char* s) { return TwoTorsionLabel::parse(3, s); }

Fq dot(const std::vector<Fq>& a, const ProjPoint& p) {
  Fq acc = a[0].zero();
  for (size_t i = 0; i < a.size(); ++i) acc = acc + a[i] * p[i];
  return acc;
}

}  // namespace

std::vector<TwoTorsionLabel> g3_incidence_labels() {
  std::vector<TwoTorsionLabel> out;
  for (const char* s : {"a24", "a37", "a67", "a123", "a145", "a167", "a256", "a345"}) out.push_back(L3(s));
  return out;
}

std::vector<TwoTorsionLabel> g3_trope_labels() {
  auto out = g3_incidence_labels();
  for (const char* s : {"a1", "a2", "a3", "a4"}) out.push_back(L3(s));
  return out;
}

Trope g3_trope(Level2Family& fam, const std::vector<TwoTorsionLabel>& basis, const TwoTorsionLabel& a, Rng& rng) {
  const Fq one(fam.curve().K, 1);
  auto it = std::find(basis.begin(), basis.end(), a);
  if (it != basis.end()) {
    Trope t{a, std::vector<Fq>(basis.size(), one.zero())};
    t.c[it - basis.begin()] = one;
    return t;
  }
  return fit_trope(fam, basis, a, rng);
}

G3Nodes nodes8_g3(Level2Family& fam, Rng& rng, int max_tries) {
  const Curve& C = fam.curve();
  if (C.g != 3) throw std::invalid_argument("nodes8_g3 needs a genus-3 curve");
  const FieldCtx* K = C.K;
  const Fq one(K, 1), zero(K, 0);
  const auto labels = g3_trope_labels();
  const int before = fam.evaluations();
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    // Shared samples: the base point row plus 7 points to fit and 2 held out.
    std::vector<std::vector<Fq>> rows{std::vector<Fq>(labels.size(), one)};
    int fails = 0;
    while (rows.size() < 10 && fails < 40) {
      const Divisor x = random_jacobian_point(C, rng);
      std::vector<Fq> r;
      bool ok = true;
      for (const auto& a : labels) {
        auto v = fam.eval(a, x);
        if (!v) {
          ok = false;
          break;
        }
        r.push_back(*v);
      }
      if (ok) {
        rows.push_back(r);
      } else {
        ++fails;
      }
    }
    if (rows.size() < 10) continue;
    // First 8-subset of the labels (incidence tropes first) with independent values on the fitting rows.
    std::vector<int> pick;
    std::vector<bool> sel(labels.size(), false);
    std::fill(sel.begin(), sel.begin() + 8, true);
    std::optional<std::vector<int>> chosen;
    do {
      pick.clear();
      for (size_t i = 0; i < labels.size(); ++i)
        if (sel[i]) pick.push_back(static_cast<int>(i));
      Matrix M;
      for (size_t r = 0; r < 8; ++r) {
        Vector row;
        for (int i : pick) row.push_back(rows[r][i]);
        M.push_back(row);
      }
      if (rank(M) == 8) chosen = pick;
    } while (!chosen && std::prev_permutation(sel.begin(), sel.end()));
    if (!chosen) continue;

    G3Nodes out;
    for (int i : *chosen) out.basis.push_back(labels[i]);
    auto basis_row = [&](size_t r) {
      std::vector<Fq> v;
      for (int i : *chosen) v.push_back(rows[r][i]);
      return v;
    };
    bool consistent = true;
    for (size_t li = 0; li < labels.size() && consistent; ++li) {
      Trope t{labels[li], std::vector<Fq>(8, zero)};
      auto pos = std::find(chosen->begin(), chosen->end(), static_cast<int>(li));
      if (pos != chosen->end()) {
        t.c[pos - chosen->begin()] = one;
      } else {
        std::vector<std::vector<Fq>> bv;
        std::vector<Fq> tv;
        for (size_t r = 0; r < 8; ++r) {
          bv.push_back(basis_row(r));
          tv.push_back(rows[r][li]);
        }
        t.c = fit_trope(bv, tv);
        for (size_t r = 8; r < rows.size(); ++r)
          if (dot(t.c, basis_row(r)) != rows[r][li]) consistent = false;
      }
      out.tropes[labels[li].mask] = t;
    }
    if (!consistent) continue;

    const auto four = std::vector<TwoTorsionLabel>{L3("a1"), L3("a2"), L3("a3"), L3("a4")};
    bool good = true;
    for (int i = 0; i < 8 && good; ++i) {
      const TwoTorsionLabel node = i < 7 ? TwoTorsionLabel::from_indices(3, {i + 1}) : TwoTorsionLabel{3, 0};
      Matrix A;
      for (const auto& a : g3_incidence_labels())
        if (trope_contains(a, node)) A.push_back(out.tropes.at(a.mask).c);
      for (const auto& a : four) A.push_back(out.tropes.at(a.mask).c);
      if (A.size() != 7) throw std::logic_error("genus-3 incidence: expected three incident tropes per node");
      auto ns = null_space(A, 8, K);
      if (ns.size() != 1) {
        good = false;
        break;
      }
      out.nodes[i] = {node, normalize_projective(ns[0])};
      for (const auto& a : labels)
        if (eval_trope(out.tropes.at(a.mask), out.nodes[i].p).is_zero() != trope_contains(a, node)) good = false;
    }
    if (!good) continue;
    out.evaluations = fam.evaluations() - before;
    return out;
  }
  throw RankDeficient("could not determine the eight genus-3 nodes");
}

std::map<size_t, P1Value> parameterize_g3(const std::vector<Trope>& four, const std::array<Node, 8>& nodes,
                                          std::pair<size_t, size_t> fixed) {
  if (four.size() != 4) throw std::invalid_argument("parameterize_g3 needs four tropes");
  if (fixed.first == fixed.second || fixed.first >= 8 || fixed.second >= 8)
    throw std::invalid_argument("two distinct fixed nodes are required");
  const FieldCtx* F = nodes[0].p[0].field();
  Matrix A;
  for (const auto& t : four) A.push_back(t.c);
  const auto W = null_space(A, 8, F);
  if (W.size() != 4) throw DegeneratePencil("the four tropes do not cut out a 3-space");
  const Matrix Wt = transpose(W);
  auto coords = [&](const ProjPoint& p) {
    auto s = solve_any(Wt, p, 4, F);
    if (!s) throw DegeneratePencil("node is not in the common 3-space of the tropes");
    return *s;
  };
  std::vector<Vector> lam;
  for (const auto& n : nodes) lam.push_back(coords(n.p));
  const auto forms = null_space(Matrix{lam[fixed.first], lam[fixed.second]}, 4, F);
  if (forms.size() != 2) throw DegeneratePencil("fixed nodes coincide");
  std::map<size_t, P1Value> out;
  for (size_t i = 0; i < 8; ++i) {
    if (i == fixed.first || i == fixed.second) continue;
    const Fq b0 = dot(forms[0], lam[i]), b1 = dot(forms[1], lam[i]);
    if (b1.is_zero()) {
      if (b0.is_zero()) throw DegeneratePencil("node on the line through the fixed nodes");
      out[i] = std::nullopt;
    } else {
      out[i] = -b0 / b1;
    }
  }
  return out;
}

G3GlueResult glue_g3(const std::map<size_t, P1Value>& first, const std::map<size_t, P1Value>& second) {
  std::vector<size_t> shared;
  for (const auto& [k, v] : first)
    if (second.count(k)) shared.push_back(k);
  if (shared.size() < 3) throw NoConsistentMap("fewer than three shared nodes");
  auto m = Mobius::from_points({first.at(shared[0]), first.at(shared[1]), first.at(shared[2])},
                               {second.at(shared[0]), second.at(shared[1]), second.at(shared[2])});
  if (!m) throw NoConsistentMap("shared values are not distinct");
  for (size_t k : shared) {
    const P1Value a = (*m)(first.at(k)), b = second.at(k);
    if (a.has_value() != b.has_value() || (a && *a != *b)) throw NoConsistentMap("shared values disagree");
  }
  G3GlueResult r;
  r.map = *m;
  for (size_t i = 0; i < 8; ++i) {
    if (second.count(i)) {
      r.values.push_back(second.at(i));
    } else if (first.count(i)) {
      r.values.push_back((*m)(first.at(i)));
    } else {
      throw NoConsistentMap("node missing from both parameterizations");
    }
  }
  return r;
}

Genus3Recovery recover_genus3(Level2Family& fam, Rng& rng, std::pair<size_t, size_t> first,
                              std::pair<size_t, size_t> second) {
  Genus3Recovery r;
  r.nodes = nodes8_g3(fam, rng);
  std::vector<Trope> four;
  for (const char* s : {"a1", "a2", "a3", "a4"}) four.push_back(r.nodes.tropes.at(L3(s).mask));
  r.params_first = parameterize_g3(four, r.nodes.nodes, first);
  r.params_second = parameterize_g3(four, r.nodes.nodes, second);
  r.glued = glue_g3(r.params_first, r.params_second);
  r.D = curve_from_values(r.glued.values, fam.curve().K);
  return r;
}

}  // namespace hyperiso
