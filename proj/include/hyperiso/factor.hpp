#pragma once

#include <utility>
#include <vector>

#include "hyperiso/field.hpp"
#include "hyperiso/poly.hpp"

namespace hyperiso {

using PolyF = Poly<Fq>;

PolyF poly_lift(const PolyF& f, const FieldCtx* F);
/// Field level shared by all coefficients (throws on incomparable levels).
const FieldCtx* poly_field(const PolyF& f, const FieldCtx* fallback = nullptr);
PolyF poly_from_ints(const FieldCtx* F, const std::vector<int64_t>& c);

/// Canonical order on polynomials: degree, then coefficient vectors from the top.
bool poly_less(const PolyF& a, const PolyF& b);

/// Squarefree factorisation f = lc * prod g_i^i; returns (g_i, i) with g_i monic, non-constant.
std::vector<std::pair<PolyF, int>> squarefree(const PolyF& f);
/// Monic irreducible factors with multiplicity in canonical order.
std::vector<std::pair<PolyF, int>> factor(const PolyF& f);
bool is_irreducible_poly(const PolyF& f);
/// Roots in the coefficient field with multiplicity, canonical order.
std::vector<std::pair<Fq, int>> roots(const PolyF& f);
/// Roots in F (f lifted first).
std::vector<std::pair<Fq, int>> roots_in(const PolyF& f, const FieldCtx* F);

/// Canonical degree-d extension of K, cached; d = 1 returns K.
const FieldCtx* extension_of_degree(const FieldCtx* K, int d);
/// Smallest canonical extension of K over which f splits.
const FieldCtx* splitting_field(const PolyF& f, const FieldCtx* K);

PolyF product_of_linears(const std::vector<Fq>& roots, const FieldCtx* F);
/// Lagrange interpolation through (x_i, y_i) with distinct x_i.
PolyF interpolate(const std::vector<Fq>& xs, const std::vector<Fq>& ys);

}  // namespace hyperiso
