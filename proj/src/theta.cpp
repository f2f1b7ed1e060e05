#include "hyperiso/theta.hpp"

#include <algorithm>

namespace hyperiso {

int Characteristic::parity() const {
  int s = 0;
  for (int i = 0; i < g; ++i) s += m[i] * n[i];
  return s & 1;
}

int Characteristic::dupont() const {
  int idx = 0;
  for (int i = 0; i < g; ++i) idx |= (n[i] << i) | (m[i] << (g + i));
  return idx;
}

Characteristic Characteristic::from_dupont(int g, int index) {
  if (g < 1 || g > 3 || index < 0 || index >= (1 << (2 * g))) throw std::invalid_argument("Dupont index out of range");
  Characteristic c;
  c.g = g;
  for (int i = 0; i < g; ++i) {
    c.n[i] = (index >> i) & 1;
    c.m[i] = (index >> (g + i)) & 1;
  }
  return c;
}

std::vector<Characteristic> all_characteristics(int g) {
  std::vector<Characteristic> out;
  for (int i = 0; i < (1 << (2 * g)); ++i) out.push_back(Characteristic::from_dupont(g, i));
  return out;
}

Characteristic characteristic_of(const TwoTorsionLabel& a, const std::vector<TwoTorsionLabel>& basis) {
  const SymplecticForm f = matrix_form(a, basis);
  Characteristic c;
  c.g = static_cast<int>(basis.size()) / 2;
  c.m = f.eps;
  c.n = f.rho;
  return c;
}

LevelTwoConfiguration full_configuration(Level2Family& fam, Rng& rng, std::vector<TwoTorsionLabel> basis,
                                         int max_tries) {
  const Curve& C = fam.curve();
  const FieldCtx* K = C.K;
  const int g = C.g;
  const size_t dim = size_t{1} << g;
  const Fq one(K, 1), zero(K, 0);
  const auto labels = all_labels(g);
  const int before = fam.evaluations();
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    // The base point row, dim - 1 fitting rows and two held-out rows.
    std::vector<std::vector<Fq>> rows{std::vector<Fq>(labels.size(), one)};
    int fails = 0;
    while (rows.size() < dim + 2 && fails < 40) {
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
    if (rows.size() < dim + 2) continue;
    auto column = [&](size_t li, size_t count) {
      std::vector<Fq> v;
      for (size_t r = 0; r < count; ++r) v.push_back(rows[r][li]);
      return v;
    };
    std::vector<size_t> pick;
    if (basis.empty()) {
      Matrix M;
      for (size_t li = 0; li < labels.size() && pick.size() < dim; ++li) {
        Matrix T = M;
        T.push_back(column(li, dim));
        if (rank(T) == static_cast<int>(T.size())) {
          M = T;
          pick.push_back(li);
        }
      }
    } else {
      for (const auto& b : basis) pick.push_back(std::find(labels.begin(), labels.end(), b) - labels.begin());
    }
    if (pick.size() != dim) continue;
    Matrix B;
    for (size_t i : pick) B.push_back(column(i, dim));
    if (rank(B) != static_cast<int>(dim)) continue;

    LevelTwoConfiguration out;
    out.g = g;
    for (size_t i : pick) out.basis.push_back(labels[i]);
    std::vector<std::vector<Fq>> fit_rows(rows.size());
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t i : pick) fit_rows[r].push_back(rows[r][i]);
    bool consistent = true;
    for (size_t li = 0; li < labels.size() && consistent; ++li) {
      Trope t{labels[li], std::vector<Fq>(dim, zero)};
      auto pos = std::find(pick.begin(), pick.end(), li);
      if (pos != pick.end()) {
        t.c[pos - pick.begin()] = one;
      } else {
        t.c = fit_trope(std::vector<std::vector<Fq>>(fit_rows.begin(), fit_rows.begin() + dim), column(li, dim));
        for (size_t r = dim; r < rows.size(); ++r) {
          Fq acc = zero;
          for (size_t k = 0; k < dim; ++k) acc += t.c[k] * fit_rows[r][k];
          if (acc != rows[r][li]) consistent = false;
        }
      }
      out.tropes[labels[li].mask] = t;
    }
    if (!consistent) continue;

    bool good = true;
    for (const auto& b : labels) {
      Matrix A;
      for (const auto& a : labels)
        if (trope_contains(a, b)) A.push_back(out.tropes.at(a.mask).c);
      auto ns = null_space(A, static_cast<int>(dim), K);
      if (ns.size() != 1) {
        good = false;
        break;
      }
      const ProjPoint p = normalize_projective(ns[0]);
      for (const auto& a : labels)
        if (eval_trope(out.tropes.at(a.mask), p).is_zero() != trope_contains(a, b)) good = false;
      out.nodes[b.mask] = p;
    }
    if (!good) continue;
    out.evaluations = fam.evaluations() - before;
    return out;
  }
  throw RankDeficient("could not fit the full trope configuration");
}

TwoTorsionLabel theta_origin(const TwoTorsionLabel& a0, const std::vector<TwoTorsionLabel>& basis) {
  TwoTorsionLabel z = a0;
  for (const auto& b : basis) z = z + b;
  return z;
}

TwoTorsionLabel origin_from_odd_tropes(const LevelTwoConfiguration& conf, const std::vector<TwoTorsionLabel>& sym) {
  std::vector<TwoTorsionLabel> found;
  for (const auto& b : all_labels(conf.g)) {
    bool on_all = true;
    for (const auto& a : all_labels(conf.g))
      if (characteristic_of(a, sym).parity() == 1 && !eval_trope(conf.tropes.at(a.mask), conf.nodes.at(b.mask)).is_zero())
        on_all = false;
    if (on_all) found.push_back(b);
  }
  if (found.size() != 1) throw DegenerateIntersection("odd tropes do not meet in a single node");
  return found[0];
}

ThetaConstants c_constants(const LevelTwoConfiguration& conf, const TwoTorsionLabel& a0,
                           const std::vector<TwoTorsionLabel>& sym) {
  ThetaConstants out;
  out.squares.g = conf.g;
  out.origin = theta_origin(a0, sym);
  const Trope& z0 = conf.tropes.at(0);
  auto value = [&](const TwoTorsionLabel& a, const TwoTorsionLabel& x) -> std::optional<Fq> {
    const ProjPoint& p = conf.nodes.at(x.mask);
    const Fq d = eval_trope(z0, p);
    if (d.is_zero()) return std::nullopt;
    return eval_trope(conf.tropes.at(a.mask), p) / d;
  };
  const auto at_origin_opt = value(TwoTorsionLabel{conf.g, 0}, out.origin);
  if (!at_origin_opt) throw ZeroDenominator("the origin node lies on the zero trope");
  for (const auto& a : all_labels(conf.g)) {
    const Characteristic ch = characteristic_of(a, sym);
    const int idx = ch.dupont();
    const Fq at_origin = *value(a, out.origin);
    if (ch.parity() == 1) {
      if (!at_origin.is_zero()) throw RelationViolation("odd theta constant does not vanish");
      out.squares.fourth[idx] = at_origin;
      continue;
    }
    if (at_origin.is_zero()) {
      out.squares.fourth[idx] = at_origin;
      continue;
    }
    const auto shifted = value(a, out.origin + a);
    if (!shifted || shifted->is_zero()) throw ZeroDenominator("degenerate node for characteristic " + std::to_string(idx));
    out.c[idx] = at_origin * *shifted;
    out.squares.fourth[idx] = at_origin * at_origin / out.c[idx];
  }
  return out;
}

int vanishing_even_constants(const ThetaSquares& s) {
  int n = 0;
  for (const auto& [idx, v] : s.fourth)
    if (Characteristic::from_dupont(s.g, idx).parity() == 0 && v.is_zero()) ++n;
  return n;
}

ThetaSquares with_canonical_squares(ThetaSquares s) {
  s.squared.clear();
  for (const auto& [idx, v] : s.fourth) {
    auto r = v.sqrt();
    if (!r) throw NonResidue("theta fourth power is not a square");
    s.squared[idx] = *r;
  }
  return s;
}

namespace {

const Fq& need(const std::map<int, Fq>& m, int i) {
  auto it = m.find(i);
  if (it == m.end()) throw std::invalid_argument("missing theta constant " + std::to_string(i));
  return it->second;
}

Fq sign_free(const Fq& X, const Fq& Y, const Fq& Z) {
  const Fq two = int_like(X, 2);
  return X * X + Y * Y + Z * Z - two * (X * Y + Y * Z + Z * X);
}

}  // namespace

RosenhainResult rosenhain(const ThetaSquares& s) {
  const auto& t = s.fourth;
  auto T = [&](int i) { return need(t, i); };
  for (int i : {1, 2, 3, 12, 15})
    if (T(i).is_zero()) throw ZeroDenominator("theta constant " + std::to_string(i) + " vanishes");
  if (!sign_free(T(4) * T(6), T(0) * T(2), T(1) * T(3)).is_zero() ||
      !sign_free(T(4) * T(9), T(1) * T(12), T(2) * T(15)).is_zero())
    throw RelationViolation("theta fourth powers violate the genus-2 relations");
  const Fq two = int_like(T(0), 2);
  // theta0 theta1 theta2 theta3 and theta1 theta2 theta12 theta15 as squares of signed products.
  const Fq p0123 = (T(0) * T(2) + T(1) * T(3) - T(4) * T(6)) / two;
  const Fq p12_12_15 = (T(1) * T(12) + T(2) * T(15) - T(4) * T(9)) / two;
  RosenhainResult r;
  r.r[0] = p0123 / (T(2) * T(3));
  r.r[1] = p12_12_15 / (T(2) * T(15));
  if (r.r[0].is_zero() || r.r[1].is_zero()) throw ZeroDenominator("degenerate Rosenhain value");
  r.r[2] = T(0) * T(1) * T(12) / (T(2) * T(3) * T(15) * r.r[0] * r.r[1]);
  const FieldCtx* K = T(0).field();
  std::vector<Fq> roots{Fq(K, 0), Fq(K, 1), r.r[0], r.r[1], r.r[2]};
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = i + 1; j < roots.size(); ++j)
      if (roots[i] == roots[j]) throw DuplicateRoot("Rosenhain values are not distinct");
  r.curve = Curve(K, product_of_linears(roots, K));
  return r;
}

std::vector<std::array<Fq, 3>> rosenhain_sign_candidates(const ThetaSquares& s) {
  const auto& t = s.fourth;
  std::array<Fq, 3> d{need(t, 0) / need(t, 3), need(t, 1) / need(t, 2), need(t, 12) / need(t, 15)};
  const FieldCtx* L = d[0].field();
  for (const auto& x : d)
    if (!x.lift_to(L).is_square()) L = extend_field(L, {-x.lift_to(L), x.lift_to(L).zero(), x.lift_to(L).one()});
  std::array<Fq, 3> q;
  for (int i = 0; i < 3; ++i) q[i] = *d[i].lift_to(L).sqrt();
  std::vector<std::array<Fq, 3>> out;
  for (int mask = 0; mask < 8; ++mask) {
    const Fq u = (mask & 1) ? -q[0] : q[0], v = (mask & 2) ? -q[1] : q[1], w = (mask & 4) ? -q[2] : q[2];
    out.push_back({u * v, v * w, u * w});
  }
  return out;
}

const std::vector<RiemannRelation>& aronhold_relations() {
  static const std::vector<RiemannRelation> rel = {
      {{1, -1, 1}, {{{61, 45, 16, 0}, {56, 40, 21, 5}, {49, 33, 28, 12}}}},
      {{1, -1, -1}, {{{5, 12, 33, 40}, {21, 28, 49, 56}, {42, 35, 14, 7}}}},
      {{1, -1, -1}, {{{49, 47, 28, 2}, {54, 40, 27, 5}, {61, 35, 16, 14}}}},
      {{1, -1, 1}, {{{54, 47, 27, 2}, {49, 40, 28, 5}, {56, 33, 21, 12}}}},
      {{-1, 1, 1}, {{{55, 32, 20, 3}, {54, 33, 21, 2}, {56, 47, 27, 12}}}},
      {{1, -1, 1}, {{{54, 33, 27, 12}, {56, 47, 21, 2}, {61, 42, 16, 7}}}},
  };
  return rel;
}

namespace {

Fq term_square(const std::array<int, 4>& idx, const std::map<int, Fq>& squared) {
  Fq p = need(squared, idx[0]);
  for (int k = 1; k < 4; ++k) p *= need(squared, idx[k]);
  return p;
}

struct AlphaEntry {
  int sign;
  std::array<int, 2> num, den;
};
// alpha[i][j]: row i is the line beta_{5+i}.
const std::array<std::array<AlphaEntry, 3>, 3>& alpha_table() {
  static const std::array<std::array<AlphaEntry, 3>, 3> t = {{
      {{{1, {12, 5}, {33, 40}}, {1, {21, 28}, {56, 49}}, {1, {7, 14}, {42, 35}}}},
      {{{1, {27, 5}, {54, 40}}, {1, {2, 28}, {47, 49}}, {1, {16, 14}, {61, 35}}}},
      {{{-1, {12, 27}, {33, 54}}, {1, {2, 21}, {47, 56}}, {1, {16, 7}, {61, 42}}}},
  }};
  return t;
}

/// Product of powers s_i^{e_i}; throws on a vanishing base with negative exponent.
Fq power_product(const std::map<int, int>& e, const std::map<int, Fq>& values, const FieldCtx* K) {
  Fq acc(K, 1);
  for (const auto& [i, k] : e) {
    if (k == 0) continue;
    const Fq& v = need(values, i);
    if (k < 0 && v.is_zero()) throw ZeroDenominator("theta constant " + std::to_string(i) + " vanishes");
    const Fq b = k < 0 ? v.inv() : v;
    for (int j = 0; j < std::abs(k); ++j) acc *= b;
  }
  return acc;
}

void add_entry(std::map<int, int>& e, const AlphaEntry& a) {
  for (int i : a.num) ++e[i];
  for (int i : a.den) --e[i];
}

}  // namespace

Fq relation_residual(const RiemannRelation& r, const std::map<int, Fq>& squared) {
  return sign_free(term_square(r.idx[0], squared), term_square(r.idx[1], squared), term_square(r.idx[2], squared));
}

Matrix aronhold_alphas(const std::map<int, Fq>& squared) {
  if (squared.empty()) throw std::invalid_argument("no theta constants");
  const FieldCtx* K = squared.begin()->second.field();
  for (const auto& r : aronhold_relations())
    if (!relation_residual(r, squared).is_zero()) throw RelationViolation("Riemann relation residual is nonzero");
  const auto& tab = alpha_table();
  Matrix out(3, Vector(3, Fq(K, 0)));
  for (int i = 0; i < 3; ++i) {
    // alpha_i1^2 as a product of squares.
    std::map<int, int> e1;
    add_entry(e1, tab[i][0]);
    const Fq a11 = power_product(e1, squared, K);
    if (a11.is_zero()) throw ZeroDenominator("alpha row has a vanishing first entry");
    out[i][0] = Fq(K, 1);
    for (int j = 1; j < 3; ++j) {
      // alpha_i1 alpha_ij = sign * theta^e; match with a product of two relation terms up to even exponents.
      std::map<int, int> e = e1;
      add_entry(e, tab[i][j]);
      const int sign = tab[i][0].sign * tab[i][j].sign;
      std::optional<Fq> value;
      for (const auto& rel : aronhold_relations())
        for (int p = 0; p < 3; ++p)
          for (int q = p + 1; q < 3; ++q) {
            std::map<int, int> f;
            for (int x : rel.idx[p]) ++f[x];
            for (int x : rel.idx[q]) ++f[x];
            std::map<int, int> half;
            bool even = true;
            std::map<int, int> all = e;
            for (const auto& [x, c] : f) all[x] -= c;
            for (const auto& [x, c] : all) {
              if (c % 2 != 0) even = false;
              half[x] = c / 2;
            }
            if (!even) continue;
            const int k = 3 - p - q;
            const Fq Pk = term_square(rel.idx[k], squared), Pp = term_square(rel.idx[p], squared),
                     Pq = term_square(rel.idx[q], squared);
            // sign_p sign_q P_p P_q = (P_k^2 - P_p^2 - P_q^2) / 2.
            Fq prod = (Pk - Pp - Pq) / Fq(K, 2);
            if (rel.sign[p] * rel.sign[q] < 0) prod = -prod;
            Fq v = prod * power_product(half, squared, K);
            if (sign < 0) v = -v;
            if (value && *value != v) throw RelationViolation("Riemann relations give inconsistent signs");
            value = v;
          }
      if (!value) throw std::logic_error("no relation fixes the sign of an alpha entry");
      out[i][j] = *value / a11;
    }
  }
  return out;
}

Matrix aronhold_alphas_direct(const std::map<int, Fq>& theta) {
  if (theta.empty()) throw std::invalid_argument("no theta constants");
  const FieldCtx* K = theta.begin()->second.field();
  const auto& tab = alpha_table();
  Matrix out(3, Vector(3, Fq(K, 0)));
  for (int i = 0; i < 3; ++i) {
    Vector row;
    for (int j = 0; j < 3; ++j) {
      std::map<int, int> e;
      add_entry(e, tab[i][j]);
      Fq v = power_product(e, theta, K);
      row.push_back(tab[i][j].sign < 0 ? -v : v);
    }
    if (row[0].is_zero()) throw ZeroDenominator("alpha row has a vanishing first entry");
    for (int j = 0; j < 3; ++j) out[i][j] = row[j] / row[0];
  }
  return out;
}

namespace {

using Mono = std::array<int, 3>;

TernaryForm linear_form(const std::array<Fq, 3>& c) {
  TernaryForm f;
  f.degree = 1;
  for (int i = 0; i < 3; ++i) {
    Mono m{0, 0, 0};
    m[i] = 1;
    if (!c[i].is_zero()) f.coeffs[m] = c[i];
  }
  return f;
}

TernaryForm mul(const TernaryForm& a, const TernaryForm& b) {
  TernaryForm r;
  r.degree = a.degree + b.degree;
  for (const auto& [ma, ca] : a.coeffs)
    for (const auto& [mb, cb] : b.coeffs) {
      const Mono m{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]};
      auto it = r.coeffs.find(m);
      if (it == r.coeffs.end()) {
        r.coeffs.emplace(m, ca * cb);
      } else {
        it->second += ca * cb;
      }
    }
  std::erase_if(r.coeffs, [](const auto& kv) { return kv.second.is_zero(); });
  return r;
}

TernaryForm add(const TernaryForm& a, const TernaryForm& b, const Fq& scale_b) {
  if (!a.coeffs.empty() && !b.coeffs.empty() && a.degree != b.degree)
    throw std::invalid_argument("adding forms of different degrees");
  TernaryForm r = a;
  r.degree = a.coeffs.empty() ? b.degree : a.degree;
  for (const auto& [m, c] : b.coeffs) {
    auto it = r.coeffs.find(m);
    if (it == r.coeffs.end()) {
      r.coeffs.emplace(m, c * scale_b);
    } else {
      it->second += c * scale_b;
    }
  }
  std::erase_if(r.coeffs, [](const auto& kv) { return kv.second.is_zero(); });
  return r;
}

bool is_square_poly(const PolyF& c) {
  const int d = c.degree();
  if (d < 0) return false;
  if (d % 2) return false;
  const PolyF m = c.scale(c.lead().inv());
  const int k = d / 2;
  std::vector<Fq> r(k + 1, m.lead().zero());
  r[k] = m.lead();
  for (int i = 1; i <= k; ++i) {
    // coefficient of x^{2k-i} in r^2 is 2 r_{k-i} + sum_{j=1}^{i-1} r_{k-j} r_{k-i+j}.
    Fq acc = m[2 * k - i];
    for (int j = 1; j < i; ++j) acc -= r[k - j] * r[k - i + j];
    r[k - i] = acc / int_like(acc, 2);
  }
  const PolyF root(r);
  return root * root == m;
}

}  // namespace

Fq TernaryForm::eval(const std::array<Fq, 3>& x) const {
  Fq acc = x[0].zero();
  for (const auto& [m, c] : coeffs) acc += c * x[0].pow(uint64_t(m[0])) * x[1].pow(uint64_t(m[1])) * x[2].pow(uint64_t(m[2]));
  return acc;
}

bool TernaryForm::is_zero() const { return coeffs.empty(); }

bool TernaryForm::proportional(const TernaryForm& o) const {
  if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
  if (degree != o.degree) return false;
  const auto& [m0, c0] = *coeffs.begin();
  auto it = o.coeffs.find(m0);
  if (it == o.coeffs.end()) return false;
  const Fq lambda = it->second / c0;
  TernaryForm d = add(o, *this, -lambda);
  return d.is_zero();
}

TernaryForm TernaryForm::permuted(const std::array<int, 3>& sigma) const {
  TernaryForm r;
  r.degree = degree;
  for (const auto& [m, c] : coeffs) {
    Mono e{0, 0, 0};
    for (int i = 0; i < 3; ++i) e[sigma[i]] = m[i];
    r.coeffs[e] = c;
  }
  return r;
}

std::vector<std::array<Fq, 3>> aronhold_lines(const Matrix& alpha) {
  const Fq one = alpha.at(0).at(0).one(), zero = one.zero();
  std::vector<std::array<Fq, 3>> out{{one, zero, zero}, {zero, one, zero}, {zero, zero, one}, {one, one, one}};
  for (const auto& row : alpha) out.push_back({row.at(0), row.at(1), row.at(2)});
  return out;
}

TernaryForm riemann_reconstruct(const Matrix& alpha) {
  if (alpha.size() != 3) throw std::invalid_argument("alpha must be 3x3");
  for (const auto& row : alpha) {
    if (row.size() != 3) throw std::invalid_argument("alpha must be 3x3");
    for (const auto& a : row)
      if (a.is_zero()) throw SingularSystem("alpha has a zero entry");
  }
  const FieldCtx* K = alpha[0][0].field();
  const Vector minus_ones(3, Fq(K, -1));
  Matrix M(3, Vector(3)), A(3, Vector(3));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      M[r][c] = alpha[c][r].inv();
      A[r][c] = alpha[r][c].inv();
    }
  const auto lambda = solve(M, minus_ones);
  if (!lambda) throw SingularSystem("the lambda system is singular");
  Matrix N(3, Vector(3));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) N[r][c] = (*lambda)[c] * alpha[c][r];
  const auto k = solve(N, minus_ones);
  if (!k) throw SingularSystem("the k system is singular");
  const auto Ainv = inverse(A);
  if (!Ainv) throw SingularSystem("the xi system is singular");
  // xi = X x with X = -A^{-1} diag(k) alpha.
  Matrix Dk(3, Vector(3, Fq(K, 0)));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) Dk[i][j] = -(*k)[i] * alpha[i][j];
  const Matrix X = mat_mul(*Ainv, Dk);
  for (int m = 0; m < 3; ++m) {
    Fq s = X[0][m] + X[1][m] + X[2][m];
    if (s != Fq(K, -1)) throw std::logic_error("xi does not satisfy the first equation");
  }
  std::array<TernaryForm, 3> prod;
  for (int j = 0; j < 3; ++j) {
    std::array<Fq, 3> xj{Fq(K, 0), Fq(K, 0), Fq(K, 0)};
    xj[j] = Fq(K, 1);
    prod[j] = mul(linear_form(xj), linear_form({X[j][0], X[j][1], X[j][2]}));
  }
  const TernaryForm s = add(add(prod[0], prod[1], Fq(K, 1)), prod[2], Fq(K, -1));
  return add(mul(s, s), mul(prod[0], prod[1]), Fq(K, -4));
}

bool is_bitangent(const TernaryForm& F, const std::array<Fq, 3>& line) {
  const FieldCtx* K = line[0].field();
  const auto span = null_space(Matrix{{line[0], line[1], line[2]}}, 3, K);
  if (span.size() != 2) throw std::invalid_argument("degenerate line");
  // F(s P + Q) as a polynomial in s; the missing top degree is the multiplicity at P.
  std::array<PolyF, 3> x;
  for (int i = 0; i < 3; ++i) x[i] = PolyF({span[1][i], span[0][i]});
  PolyF acc;
  for (const auto& [m, c] : F.coeffs) {
    PolyF t(std::vector<Fq>{c});
    for (int i = 0; i < 3; ++i)
      for (int e = 0; e < m[i]; ++e) t = t * x[i];
    acc = acc + t;
  }
  const int d = acc.degree();
  if (d < 0) return false;
  if ((F.degree - d) % 2) return false;
  return is_square_poly(acc);
}

}  // namespace hyperiso
