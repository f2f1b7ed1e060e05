#include "hyperiso/kummer_geom.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "hyperiso/linalg.hpp"

namespace hyperiso {

namespace {

uint32_t full_mask(int g) { return (1u << (2 * g + 1)) - 1; }

uint32_t canonical_mask(int g, uint32_t m) {
  m &= full_mask(g);
  return std::popcount(m) > g ? m ^ full_mask(g) : m;
}

}  // namespace

TwoTorsionLabel TwoTorsionLabel::from_indices(int g, const std::vector<int>& idx) {
  if (g != 2 && g != 3) throw std::invalid_argument("labels are defined for genus 2 and 3");
  uint32_t m = 0;
  for (int i : idx) {
    if (i < 1 || i > 2 * g + 2) throw std::invalid_argument("Weierstrass index out of range");
    if (i <= 2 * g + 1) m ^= 1u << (i - 1);
  }
  return {g, canonical_mask(g, m)};
}

TwoTorsionLabel TwoTorsionLabel::parse(int g, const std::string& s) {
  if (s.size() < 2 || s[0] != 'a') throw std::invalid_argument("bad label: " + s);
  std::vector<int> idx;
  for (size_t i = 1; i < s.size(); ++i) {
    if (s[i] < '1' || s[i] > '9') throw std::invalid_argument("bad label: " + s);
    idx.push_back(s[i] - '0');
  }
  return from_indices(g, idx);
}

std::vector<int> TwoTorsionLabel::indices() const {
  std::vector<int> r;
  for (int i = 0; i < 2 * g + 1; ++i)
    if (mask >> i & 1) r.push_back(i + 1);
  return r;
}

std::string TwoTorsionLabel::name() const {
  if (mask == 0) return "a" + std::to_string(2 * g + 2);
  std::string s = "a";
  for (int i : indices()) s += std::to_string(i);
  return s;
}

TwoTorsionLabel TwoTorsionLabel::operator+(const TwoTorsionLabel& o) const {
  if (g != o.g) throw std::invalid_argument("labels of different genus");
  return {g, canonical_mask(g, mask ^ o.mask)};
}

std::vector<TwoTorsionLabel> all_labels(int g) {
  std::vector<TwoTorsionLabel> out;
  for (uint32_t m = 0; m <= full_mask(g); ++m)
    if (std::popcount(m) <= g) out.push_back({g, m});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const int pa = std::popcount(a.mask), pb = std::popcount(b.mask);
    if (pa != pb) return pa < pb;
    return a.indices() < b.indices();
  });
  return out;
}

int weil_pairing2(const TwoTorsionLabel& a, const TwoTorsionLabel& b) {
  const int both_odd = (std::popcount(a.mask) & 1) & (std::popcount(b.mask) & 1);
  return (std::popcount(a.mask & b.mask) + both_odd) & 1;
}

bool trope_contains(const TwoTorsionLabel& a, const TwoTorsionLabel& node) {
  return std::popcount((a + node).mask) <= a.g - 1;
}

std::vector<TwoTorsionLabel> symplectic_basis(int g) {
  const auto labels = all_labels(g);
  std::vector<TwoTorsionLabel> e, f;
  auto orthogonal = [&](const TwoTorsionLabel& x) {
    for (size_t j = 0; j < e.size(); ++j)
      if (weil_pairing2(x, e[j]) || weil_pairing2(x, f[j])) return false;
    return true;
  };
  for (int i = 0; i < g; ++i) {
    auto ei = std::find_if(labels.begin() + 1, labels.end(), orthogonal);
    e.push_back(*ei);
    auto fi = std::find_if(labels.begin() + 1, labels.end(), [&](const TwoTorsionLabel& x) {
      e.pop_back();
      const bool ok = orthogonal(x);
      e.push_back(*ei);
      return ok && weil_pairing2(x, *ei) == 1;
    });
    f.push_back(*fi);
  }
  e.insert(e.end(), f.begin(), f.end());
  return e;
}

SymplecticForm matrix_form(const TwoTorsionLabel& a, const std::vector<TwoTorsionLabel>& basis) {
  const int g = static_cast<int>(basis.size()) / 2;
  SymplecticForm m;
  for (int i = 0; i < g; ++i) {
    m.eps[i] = weil_pairing2(a, basis[g + i]);
    m.rho[i] = weil_pairing2(a, basis[i]);
  }
  return m;
}

namespace {

int matching_columns(const SymplecticForm& a, const SymplecticForm& b, int g) {
  int n = 0;
  for (int i = 0; i < g; ++i) n += (a.eps[i] == b.eps[i] && a.rho[i] == b.rho[i]);
  return n;
}

}  // namespace

bool incidence_g2(const SymplecticForm& a1, const SymplecticForm& a2) { return matching_columns(a1, a2, 2) == 1; }

bool incidence_g3(const SymplecticForm& a1, const SymplecticForm& a2, bool hyperelliptic, bool a1_minus_a2_is_a0) {
  const int m = matching_columns(a1, a2, 3);
  if (m == 3) return true;
  if (m == 1) return true;
  return hyperelliptic && a1_minus_a2_is_a0;
}

std::optional<TwoTorsionLabel> find_a0(int g, const std::vector<TwoTorsionLabel>& basis) {
  const auto labels = all_labels(g);
  for (const auto& a0 : labels) {
    bool ok = true;
    for (const auto& a : labels) {
      const auto a2 = a + a0;
      const auto m2 = matrix_form(a2, basis);
      for (const auto& node : labels) {
        const auto m1 = matrix_form(node, basis);
        const bool pred = g == 2 ? incidence_g2(m1, m2) : incidence_g3(m1, m2, true, node == a2 + a0);
        if (pred != trope_contains(a, node)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return a0;
  }
  return std::nullopt;
}

const std::vector<std::pair<std::string, std::array<std::string, 6>>>& table_16_6() {
  static const std::vector<std::pair<std::string, std::array<std::string, 6>>> t = {
      {"a1", {"a1", "a6", "a12", "a13", "a14", "a15"}},  {"a2", {"a2", "a6", "a12", "a23", "a24", "a25"}},
      {"a3", {"a3", "a6", "a13", "a23", "a34", "a35"}},  {"a4", {"a4", "a6", "a14", "a24", "a34", "a45"}},
      {"a5", {"a5", "a6", "a15", "a25", "a35", "a45"}},  {"a6", {"a1", "a2", "a3", "a4", "a5", "a6"}},
      {"a12", {"a1", "a2", "a12", "a34", "a35", "a45"}}, {"a13", {"a1", "a3", "a13", "a24", "a25", "a45"}},
      {"a14", {"a1", "a4", "a14", "a23", "a25", "a35"}}, {"a15", {"a1", "a5", "a15", "a23", "a24", "a34"}},
      {"a23", {"a2", "a3", "a14", "a15", "a23", "a45"}}, {"a24", {"a2", "a4", "a13", "a15", "a24", "a35"}},
      {"a25", {"a2", "a5", "a13", "a14", "a25", "a34"}}, {"a34", {"a3", "a4", "a12", "a15", "a25", "a34"}},
      {"a35", {"a3", "a5", "a12", "a14", "a24", "a35"}}, {"a45", {"a4", "a5", "a12", "a13", "a23", "a45"}},
  };
  return t;
}

void check_configuration_table() {
  const auto& t = table_16_6();
  if (t.size() != 16) throw std::logic_error("configuration table has wrong size");
  for (const auto& [trope, nodes] : t) {
    const auto a = TwoTorsionLabel::parse(2, trope);
    std::vector<uint32_t> expected, derived;
    for (const auto& n : nodes) expected.push_back(TwoTorsionLabel::parse(2, n).mask);
    for (const auto& n : all_labels(2))
      if (trope_contains(a, n)) derived.push_back(n.mask);
    std::sort(expected.begin(), expected.end());
    std::sort(derived.begin(), derived.end());
    if (expected != derived) throw std::logic_error("derived incidence disagrees with the table at Z_" + trope);
  }
}

std::vector<Fq> weierstrass_roots(const Curve& C) {
  auto rs = roots(C.f);
  if (static_cast<int>(rs.size()) != 2 * C.g + 1) throw Unsupported("f does not split over the base field");
  std::vector<Fq> out;
  for (const auto& [r, m] : rs) out.push_back(r);
  return out;
}

Divisor label_divisor(const Curve& C, const TwoTorsionLabel& a) {
  if (a.g != C.g) throw std::invalid_argument("label genus differs from the curve");
  const auto rs = weierstrass_roots(C);
  std::vector<Fq> sel;
  for (int i : a.indices()) sel.push_back(rs[i - 1]);
  return {product_of_linears(sel, C.K), PolyF()};
}

ProjPoint normalize_projective(ProjPoint p) {
  for (size_t i = p.size(); i-- > 0;) {
    if (p[i].is_zero()) continue;
    const Fq s = p[i].inv();
    for (auto& c : p) c = c * s;
    return p;
  }
  throw DegenerateIntersection("zero projective vector");
}

Level2Family::Level2Family(const Curve& C, const KernelData& V, const Divisor& y, const EtafOptions& opt)
    : C_(C), V_(V), y_(y), opt_(opt) {
  static const bool checked = (check_configuration_table(), true);
  (void)checked;
}

const EtafContext& Level2Family::get(const TwoTorsionLabel& a) {
  auto it = ctx_.find(a.mask);
  if (it != ctx_.end()) return *it->second;
  auto ctx = std::make_unique<EtafContext>(C_, V_, level2_cycle(C_, label_divisor(C_, a)), y_, opt_);
  if (!opt_.phi_u) {
    opt_.phi_u = ctx->phi_u();
    opt_.phi_y = ctx->phi_y();
  }
  return *ctx_.emplace(a.mask, std::move(ctx)).first->second;
}

std::optional<Fq> Level2Family::eval(const TwoTorsionLabel& a, const Divisor& x) {
  if (a.is_zero()) return Fq(C_.K, 1);
  const EtafContext& ctx = get(a);
  ++evals_;
  return ctx.eval(x);
}

std::optional<Series> Level2Family::eval_formal(const TwoTorsionLabel& a, const SeriesDivisor& x) {
  if (a.is_zero()) return Series::constant(Fq(series_divisor_field(x), 1), series_divisor_prec(x));
  const EtafContext& ctx = get(a);
  ++evals_;
  return ctx.eval_formal(x);
}

std::vector<Fq> fit_trope(const std::vector<std::vector<Fq>>& basis_values, const std::vector<Fq>& target_values) {
  if (basis_values.empty() || basis_values.size() != target_values.size())
    throw std::invalid_argument("fit_trope: shape mismatch");
  const int n = static_cast<int>(basis_values[0].size());
  const FieldCtx* F = target_values[0].field();
  if (rank(basis_values) < n) throw SingularSystem("trope fit: basis values are dependent");
  auto sol = solve_any(basis_values, target_values, n, F);
  if (!sol) throw SingularSystem("trope fit: inconsistent samples");
  return *sol;
}

Fq eval_trope(const Trope& t, const ProjPoint& p) {
  Fq acc = p[0].zero();
  for (size_t i = 0; i < t.c.size(); ++i) acc = acc + t.c[i] * p[i];
  return acc;
}

std::optional<ProjPoint> kummer_image(Level2Family& fam, const std::vector<TwoTorsionLabel>& basis, const Divisor& x) {
  ProjPoint p;
  for (const auto& b : basis) {
    auto v = fam.eval(b, x);
    if (!v) return std::nullopt;
    p.push_back(*v);
  }
  return p;
}

Trope fit_trope(Level2Family& fam, const std::vector<TwoTorsionLabel>& basis, const TwoTorsionLabel& target, Rng& rng,
                int max_tries) {
  const Fq one(fam.curve().K, 1);
  const size_t n = basis.size();
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    std::vector<std::vector<Fq>> rows{std::vector<Fq>(n, one)};
    std::vector<Fq> rhs{one};
    std::vector<std::pair<ProjPoint, Fq>> held;
    int fails = 0;
    while (rows.size() + held.size() < n + 2 && fails < 4 * static_cast<int>(n)) {
      Divisor x = random_jacobian_point(fam.curve(), rng);
      auto p = kummer_image(fam, basis, x);
      auto t = fam.eval(target, x);
      if (!p || !t) {
        ++fails;
        continue;
      }
      if (rows.size() < n) {
        rows.push_back(*p);
        rhs.push_back(*t);
      } else {
        held.push_back({*p, *t});
      }
    }
    if (rows.size() + held.size() < n + 2) continue;
    try {
      Trope tr{target, fit_trope(rows, rhs)};
      bool ok = true;
      for (const auto& [p, t] : held) ok = ok && eval_trope(tr, p) == t;
      if (ok) return tr;
    } catch (const SingularSystem&) {
    }
  }
  throw SingularSystem("trope fit failed for " + target.name());
}

namespace {

ProjPoint cross3(const std::vector<Fq>& a, const std::vector<Fq>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

ProjPoint intersect_planes(const std::vector<std::vector<Fq>>& planes) {
  const int n = static_cast<int>(planes[0].size());
  auto ns = null_space(planes, n, planes[0][0].field());
  if (ns.size() != 1) throw DegenerateIntersection("planes do not meet in a single point");
  return normalize_projective(ns[0]);
}

Algorithm1Result nodes_algorithm1(Level2Family& fam, Rng& rng, bool with_a3, int max_tries) {
  const Curve& C = fam.curve();
  if (C.g != 2) throw std::invalid_argument("nodes_algorithm1 is for genus 2");
  auto L = [](const char* s) { return TwoTorsionLabel::parse(2, s); };
  const TwoTorsionLabel a1 = L("a1"), a2 = L("a2"), a3 = L("a3"), a12 = L("a12"), a34 = L("a34"), a35 = L("a35"),
                       a45 = L("a45");
  for (const auto& t : {a34, a35, a45})
    if (!trope_contains(t, a12)) throw std::logic_error("trope does not pass through phi(a12)");
  const Divisor d45 = label_divisor(C, a45);
  const int start = fam.evaluations();

  auto c_inv = fam.eval(a35, cantor_add(C, fam.base(), d45));
  if (!c_inv || c_inv->is_zero()) throw EvaluationFailed("eta_a35(y + a45) unavailable");
  const Fq c = c_inv->inv();
  const Fq one(C.K, 1);

  for (int attempt = 0; attempt < max_tries; ++attempt) {
    const Divisor z = random_jacobian_point(C, rng);
    const Divisor za = cantor_add(C, z, d45);
    std::map<uint32_t, std::array<Fq, 2>> v;
    bool ok = true;
    for (const auto& a : {a1, a2, a12, a35, a45}) {
      auto x0 = fam.eval(a, z), x1 = fam.eval(a, za);
      if (!x0 || !x1) {
        ok = false;
        break;
      }
      v[a.mask] = {*x0, *x1};
    }
    if (ok && with_a3) {
      auto x0 = fam.eval(a3, z), x1 = fam.eval(a3, za);
      ok = x0 && x1;
      if (ok) v[a3.mask] = {*x0, *x1};
    }
    if (!ok) continue;
    v[a34.mask] = {c * v[a35.mask][1] * v[a45.mask][0], c * v[a35.mask][0] * v[a45.mask][1]};

    Matrix A = {{one, one, one},
                {v[a1.mask][0], v[a2.mask][0], v[a12.mask][0]},
                {v[a1.mask][1], v[a2.mask][1], v[a12.mask][1]}};
    auto Ainv = inverse(A);
    if (!Ainv) continue;
    Algorithm1Result res;
    res.shift_constant = c;
    std::map<uint32_t, std::vector<Fq>> coef;
    for (const auto& t : {a34, a35, a45}) {
      auto sol = mat_vec(*Ainv, {one, v[t.mask][0], v[t.mask][1]});
      coef[t.mask] = sol;
      res.tropes.push_back({t, {one.zero(), sol[0], sol[1], sol[2]}});
    }
    auto node = [&](const TwoTorsionLabel& p, const TwoTorsionLabel& s, const TwoTorsionLabel& t) {
      ProjPoint x = cross3(coef[s.mask], coef[t.mask]);
      x.insert(x.begin(), one.zero());
      return Node{p, normalize_projective(x)};
    };
    const Fq z0 = one.zero();
    try {
      res.nodes[0] = {a1, {z0, z0, one, z0}};
      res.nodes[1] = {a2, {z0, one, z0, z0}};
      res.nodes[2] = node(L("a3"), a34, a35);
      res.nodes[3] = node(L("a4"), a34, a45);
      res.nodes[4] = node(L("a5"), a35, a45);
      res.nodes[5] = {L("a6"), {z0, z0, z0, one}};
      if (with_a3) {
        Matrix B = {{one, one, one}, {one, v[a1.mask][0], v[a2.mask][0]}, {one, v[a1.mask][1], v[a2.mask][1]}};
        auto Binv = inverse(B);
        if (!Binv) continue;
        auto s3 = mat_vec(*Binv, {one, v[a3.mask][0], v[a3.mask][1]});
        res.z_a3 = Trope{a3, {s3[0], s3[1], s3[2], z0}};
        const std::vector<Fq> z4 = {z0, z0, z0, one};
        res.extra.push_back({a12, {one, z0, z0, z0}});
        res.extra.push_back({a34, intersect_planes({res.z_a3->c, z4, res.tropes[0].c})});
        res.extra.push_back({a35, intersect_planes({res.z_a3->c, z4, res.tropes[1].c})});
      }
    } catch (const DegenerateIntersection&) {
      continue;
    }
    res.evaluations = fam.evaluations() - start;
    return res;
  }
  throw DegenerateIntersection("Algorithm 1: no usable auxiliary point");
}

std::vector<std::vector<int>> monomials(int n, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n - 1) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[i] = e;
      self(self, i + 1, left - e);
    }
  };
  rec(rec, 0, d);
  return out;
}

Fq eval_monomial(const std::vector<int>& m, const ProjPoint& p) {
  Fq acc = p[0].one();
  for (size_t i = 0; i < m.size(); ++i) acc = acc * p[i].pow(static_cast<uint64_t>(m[i]));
  return acc;
}

std::vector<std::vector<Fq>> fit_kummer_equation(const std::vector<ProjPoint>& pts, int degree) {
  if (pts.empty()) throw RankDeficient("no sample points");
  const auto mons = monomials(static_cast<int>(pts[0].size()), degree);
  if (pts.size() < mons.size()) throw RankDeficient("fewer samples than monomials");
  Matrix A;
  for (const auto& p : pts) {
    std::vector<Fq> row;
    for (const auto& m : mons) row.push_back(eval_monomial(m, p));
    A.push_back(std::move(row));
  }
  return null_space(A, static_cast<int>(mons.size()), pts[0][0].field());
}

}  // namespace hyperiso
