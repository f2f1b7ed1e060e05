#include "hyperiso/isogeny.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace hyperiso {

namespace {

Series descend_series(const Series& s, const FieldCtx* K) {
  std::vector<Fq> c;
  for (const auto& a : s.coeffs()) c.push_back(a.descend_to(K));
  return Series::from_coeffs(K, c, s.prec());
}

Series pad(const Series& s, int prec) {
  if (s.prec() >= prec) return s.truncate(prec);
  return Series::from_coeffs(s.field(), s.coeffs(), prec);
}

PolyF lift_poly(const PolyF& p, const FieldCtx* F) {
  return p.map([F](const Fq& a) { return a.lift_to(F); });
}

/// v(t) = sqrt(h_C(u0 + t)) with v(0) = v0.
Series formal_v(const FormalState& st, int prec) {
  const Series u = Series::linear(st.u0.lift_to(st.L), Fq(st.L, 1), prec);
  return series_poly(st.hC, prec, st.L).eval(u).sqrt(st.v0.lift_to(st.L));
}

Series formal_u(const FormalState& st, int prec) { return Series::linear(st.u0.lift_to(st.L), Fq(st.L, 1), prec); }

/// sum_j x_j^i xdot_j / y_j for i = 0..g-1 at precision prec (x of precision prec + 1).
std::vector<Series> lhs_terms(const std::vector<Series>& x, const std::vector<Series>& y, int g, int prec) {
  std::vector<Series> out;
  std::vector<Series> w, xd;
  for (size_t j = 0; j < x.size(); ++j) {
    xd.push_back(x[j].derivative().truncate(prec));
    w.push_back(y[j].truncate(prec).inv());
  }
  for (int i = 0; i < g; ++i) {
    Series acc(x[0].field(), prec);
    for (size_t j = 0; j < x.size(); ++j) acc += x[j].truncate(prec).pow(static_cast<uint64_t>(i)) * xd[j] * w[j];
    out.push_back(acc);
  }
  return out;
}

/// (sum_k m[k][i] u^k) / v for i = 0..g-1.
std::vector<Series> rhs_terms(const FormalState& st, int prec) {
  const Series u = formal_u(st, prec), vinv = formal_v(st, prec).inv();
  std::vector<Series> out;
  for (int i = 0; i < st.g; ++i) {
    Series acc(st.L, prec);
    for (int k = 0; k < st.g; ++k) acc += u.pow(static_cast<uint64_t>(k)) * st.m[k][i].lift_to(st.L);
    out.push_back(acc * vinv);
  }
  return out;
}

struct FormalKummer {
  Point base;
  SeriesDivisor point;
  SeriesPoint zm, zm1, z2m1;
  int evaluations = 0;
};

FormalKummer formal_kummer_images(Level2Family& fam, const std::vector<TwoTorsionLabel>& basis, const Point& base,
                                  int prec, int m) {
  const Curve& C = fam.curve();
  const FieldCtx* K = C.K;
  if (m < 2) throw std::invalid_argument("formal_image needs m >= 2");
  if (base.inf || base.y.is_zero()) throw SpecialPoint("base point must be affine and not a Weierstrass point");
  const Series u = Series::linear(base.x, Fq(K, 1), prec);
  const Series v = series_poly(C.f, prec, K).eval(u).sqrt(base.y);
  FormalKummer r;
  r.base = base;
  r.point = {Poly<Series>({-u, u.one()}), Poly<Series>({v})};
  const int before = fam.evaluations();
  auto image_of = [&](int n) {
    const SeriesDivisor nP = series_scalar_mul(C, n, r.point);
    SeriesPoint z;
    for (const auto& b : basis) {
      auto e = fam.eval_formal(b, nP);
      if (!e) throw SpecialPoint("eta_f is undefined at a multiple of the formal point");
      z.push_back(descend_series(*e, K));
    }
    return z;
  };
  r.zm = image_of(m);
  r.zm1 = image_of(m + 1);
  r.z2m1 = image_of(2 * m + 1);
  r.evaluations = fam.evaluations() - before;
  return r;
}

FormalImage finish_formal_image(const FormalKummer& fk, const ChangeOfVariables& cv, const KummerOpt& opt) {
  FormalImage im;
  im.base = fk.base;
  im.point = fk.point;
  im.evaluations = fk.evaluations;
  im.image = opt.pseudo_diff_lift(cv.apply(fk.zm1), cv.apply(fk.zm), cv.apply(fk.z2m1));
  return im;
}

}  // namespace

const std::vector<std::string>& IsogenyFractions::names(int genus) {
  static const std::vector<std::string> g2 = {"S", "P", "Q", "R"}, g3 = {"S", "P", "A", "R", "T", "E"};
  if (genus == 2) return g2;
  if (genus == 3) return g3;
  throw std::invalid_argument("isogeny fractions are defined for genus 2 and 3");
}

std::optional<Divisor> IsogenyFractions::image(const Point& P) const {
  if (P.inf) return std::nullopt;
  if (parts.size() != names(genus).size()) throw std::invalid_argument("wrong number of fraction parts");
  const FieldCtx* F = P.x.field();
  std::vector<Fq> val;
  for (const auto& [n, d] : parts) {
    const Fq dv = lift_poly(d, F).eval(P.x);
    if (dv.is_zero()) return std::nullopt;
    val.push_back(lift_poly(n, F).eval(P.x) / dv);
  }
  const Fq one(F, 1), y = P.y.lift_to(F);
  if (genus == 2) {
    PolyF u({val[1], -val[0], one});
    PolyF v({y * val[3], y * val[2]});
    return Divisor{u, v};
  }
  PolyF u({-val[2], val[1], -val[0], one});
  PolyF v({y * val[5], -(y * val[4]), y * val[3]});
  return Divisor{u, v};
}

std::vector<int> degree_bounds_g2(int ell) { return {2 * ell, 2 * ell, 3 * ell + 3, 3 * ell + 3}; }

int reconstruction_precision(int ell, int margin) { return 2 * (3 * ell + 4) + margin; }

PolyF parse_polynomial(const FieldCtx* F, const std::string& text) {
  std::vector<Fq> c;
  auto add = [&](int deg, const Fq& a) {
    if (static_cast<int>(c.size()) <= deg) c.resize(deg + 1, Fq(F, 0));
    c[deg] = c[deg] + a;
  };
  size_t i = 0;
  const size_t n = text.size();
  auto skip = [&] {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  bool any = false;
  while (true) {
    skip();
    if (i >= n) break;
    int sign = 1;
    while (i < n && (text[i] == '+' || text[i] == '-')) {
      if (text[i] == '-') sign = -sign;
      ++i;
      skip();
    }
    mpz_class coef = 1;
    bool has_coef = false;
    size_t start = i;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) {
      coef = mpz_class(text.substr(start, i - start));
      has_coef = true;
    }
    skip();
    if (i < n && text[i] == '*') {
      ++i;
      skip();
    }
    int deg = 0;
    if (i < n && std::isalpha(static_cast<unsigned char>(text[i]))) {
      ++i;
      deg = 1;
      skip();
      if (i < n && text[i] == '^') {
        ++i;
        skip();
        if (i < n && text[i] == '{') ++i;
        start = i;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) throw std::invalid_argument("missing exponent in polynomial");
        deg = std::stoi(text.substr(start, i - start));
        if (i < n && text[i] == '}') ++i;
      }
    } else if (!has_coef) {
      throw std::invalid_argument("cannot parse polynomial near: " + text.substr(i));
    }
    mpz_class r = coef % mpz_class(static_cast<unsigned long>(F->p));
    Fq a(F, static_cast<int64_t>(r.get_si()));
    add(deg, sign < 0 ? -a : a);
    any = true;
  }
  if (!any) throw std::invalid_argument("empty polynomial");
  return PolyF(c);
}

FormalImage formal_image(Level2Family& fam, const std::vector<TwoTorsionLabel>& basis, const ChangeOfVariables& cv,
                         const KummerOpt& opt, const Point& base, int prec, int m) {
  return finish_formal_image(formal_kummer_images(fam, basis, base, prec, m), cv, opt);
}

FormalState decompose_image(const Curve& C, const Curve& D, const FormalImage& im) {
  const SeriesDivisor& I = im.image;
  const int g = D.g;
  if (I.u.degree() != g) throw SpecialPoint("image of the formal point is not of full weight");
  const Divisor I0 = series_divisor_at_zero(I);
  const FieldCtx* K = D.K;
  const FieldCtx* L = splitting_field(I0.u, K);
  const auto roots = roots_in(I0.u, L);
  if (static_cast<int>(roots.size()) != g) throw SpecialPoint("image has repeated support at t = 0");
  const SeriesDivisor IL = lift_series_divisor(I, L);
  const int prec = series_divisor_prec(IL);
  const Poly<Series> du = IL.u.derivative();
  FormalState st;
  st.g = g;
  st.hC = C.f;
  st.hD = D.f;
  st.u0 = im.base.x;
  st.v0 = im.base.y;
  st.K = K;
  st.L = L;
  for (const auto& [r, mult] : roots) {
    Series a = Series::constant(r, prec);
    for (int k = 1; k < 2 * prec; k *= 2) a = a - IL.u.eval(a) / du.eval(a);
    if (!IL.u.eval(a).is_zero()) throw SpecialPoint("Hensel lifting of the support failed");
    const Series y = IL.v.eval(a);
    if (!y.is_unit()) throw SpecialPoint("image meets a Weierstrass point at t = 0");
    st.x.push_back(a);
    st.y.push_back(y);
  }
  return st;
}

Matrix solve_pullback_matrix(FormalState& st) {
  const int g = st.g, P = st.prec() - 1;
  if (P < g) throw InsufficientPrecision("pullback matrix needs precision g + 1");
  const FieldCtx* L = st.L;
  const Series u = formal_u(st, P), vinv = formal_v(st, P).inv();
  Matrix A(g, Vector(g, Fq(L, 0)));
  for (int k = 0; k < g; ++k) {
    const Series col = u.pow(static_cast<uint64_t>(k)) * vinv;
    for (int d = 0; d < g; ++d) A[d][k] = col[d];
  }
  const auto lhs = lhs_terms(st.x, st.y, g, P);
  st.m.assign(g, Vector(g, Fq(st.K, 0)));
  for (int i = 0; i < g; ++i) {
    Vector b;
    for (int d = 0; d < g; ++d) b.push_back(lhs[i][d]);
    auto sol = solve(A, b);
    if (!sol) throw SingularSystem("pullback system is singular");
    for (int k = 0; k < g; ++k) st.m[k][i] = (*sol)[k].descend_to(st.K);
  }
  for (const auto& r : differential_residual(st))
    if (!r.is_zero()) throw SingularSystem("formal image is inconsistent with the differential system");
  return st.m;
}

std::vector<Series> differential_residual(const FormalState& st) {
  const int P = st.prec() - 1;
  const auto lhs = lhs_terms(st.x, st.y, st.g, P);
  const auto rhs = rhs_terms(st, P);
  std::vector<Series> out;
  for (int i = 0; i < st.g; ++i) out.push_back(lhs[i] - rhs[i]);
  return out;
}

void extend_precision(FormalState& st, int N) {
  if (st.m.empty()) solve_pullback_matrix(st);
  const int g = st.g;
  const FieldCtx* L = st.L;
  if (st.prec() >= N) {
    for (int j = 0; j < g; ++j) {
      st.x[j] = st.x[j].truncate(N);
      st.y[j] = st.y[j].truncate(N);
    }
    return;
  }
  Matrix J(g, Vector(g, Fq(L, 0)));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) J[i][j] = st.x[j][0].pow(static_cast<uint64_t>(i)) / st.y[j][0];
  auto Jinv = inverse(J);
  if (!Jinv) throw SingularStep("per-degree Jacobian matrix is singular");
  while (st.prec() < N) {
    const int d = st.prec();
    std::vector<Series> xe;
    for (int j = 0; j < g; ++j) xe.push_back(pad(st.x[j], d + 1));
    const auto lhs = lhs_terms(xe, st.y, g, d);
    const auto rhs = rhs_terms(st, d);
    Vector r;
    for (int i = 0; i < g; ++i) r.push_back((rhs[i][d - 1] - lhs[i][d - 1]) * Fq(L, d).inv());
    const Vector c = mat_vec(*Jinv, r);
    for (int j = 0; j < g; ++j) {
      xe[j].set(d, c[j]);
      st.x[j] = xe[j];
      st.y[j] = series_poly(st.hD, d + 1, L).eval(xe[j]).sqrt(st.y[j][0]);
    }
  }
}

IsogenyFractions reconstruct(const FormalState& st, const std::vector<int>& bounds) {
  const int g = st.g, P = st.prec();
  const FieldCtx* L = st.L;
  const FieldCtx* K = st.K;
  const Series one = Series::constant(Fq(L, 1), P);
  Poly<Series> U = Poly<Series>::constant(one), V;
  for (int j = 0; j < g; ++j) {
    U = U * Poly<Series>({-st.x[j], one});
    Poly<Series> basis = Poly<Series>::constant(st.y[j]);
    for (int k = 0; k < g; ++k)
      if (k != j) basis = basis * Poly<Series>({-st.x[k], one}).scale((st.x[j] - st.x[k]).inv());
    V = V + basis;
  }
  const Series vinv = formal_v(st, P).inv();
  const Series zero = one.zero();
  std::vector<Series> parts;
  if (g == 2) {
    parts = {-U.coeff(1, zero), U.coeff(0, zero), V.coeff(1, zero) * vinv, V.coeff(0, zero) * vinv};
  } else if (g == 3) {
    parts = {-U.coeff(2, zero), U.coeff(1, zero), -U.coeff(0, zero),
             V.coeff(2, zero) * vinv, -(V.coeff(1, zero) * vinv), V.coeff(0, zero) * vinv};
  } else {
    throw std::invalid_argument("reconstruct supports genus 2 and 3");
  }
  if (bounds.size() != parts.size()) throw std::invalid_argument("one degree bound per fraction part");
  IsogenyFractions fr;
  fr.genus = g;
  const PolyF shift({-st.u0.descend_to(K), Fq(K, 1)});
  for (size_t i = 0; i < parts.size(); ++i) {
    const Series s = descend_series(parts[i], K);
    auto [n, d] = reconstruct_fraction(s, bounds[i], bounds[i]);
    if (n.degree() > bounds[i] || d.degree() > bounds[i]) throw DegreeOverflow("fraction exceeds its degree bound");
    if (expand_fraction(n, d, P, K) != s) throw NoConvergence("re-expansion does not match the series");
    PolyF ns = n.compose(shift), ds = d.compose(shift);
    const Fq lc = ds.lead().inv();
    fr.parts.push_back({ns.scale(lc), ds.scale(lc)});
  }
  return fr;
}

namespace {

std::optional<Divisor> sum_images(const Curve& D, const IsogenyFractions& fr, const std::vector<Point>& pts,
                                  const FieldCtx* F) {
  Divisor acc = zero_divisor(F);
  for (const auto& P : pts) {
    auto im = fr.image(P);
    if (!im) return std::nullopt;
    acc = cantor_add(D, acc, lift_divisor(*im, F));
  }
  return acc;
}

}  // namespace

VerifyReport verify_isogeny(const Curve& C, const Curve& D, const IsogenyFractions& fr,
                            const std::vector<Divisor>& kernel_generators, int samples, Rng& rng) {
  VerifyReport rep;
  const FieldCtx* K = C.K;
  for (int s = 0; s < samples; ++s) {
    const Point P = random_curve_point(C, K, rng);
    auto im = fr.image(P);
    if (!im) {
      ++rep.skipped;
      continue;
    }
    if (is_valid(D, *im) && im->u.degree() == D.g) {
      ++rep.validity_ok;
    } else {
      ++rep.validity_fail;
      std::ostringstream os;
      os << "validity at u = " << P.x;
      rep.failures.push_back(os.str());
    }
  }
  for (int s = 0; s < samples; ++s) {
    std::vector<Point> pts;
    for (int i = 0; i <= C.g; ++i) pts.push_back(random_curve_point(C, K, rng));
    const Divisor sum = from_points(C, pts);
    const FieldCtx* L = nullptr;
    const auto red = mumford_decompose(C, sum, &L);
    auto lhs = sum_images(D, fr, pts, L);
    auto rhs = sum_images(D, fr, red, L);
    if (!lhs || !rhs) {
      ++rep.skipped;
      continue;
    }
    if (*lhs == *rhs) {
      ++rep.homomorphism_ok;
    } else {
      ++rep.homomorphism_fail;
      rep.failures.push_back("homomorphism on a reduced sum of " + std::to_string(pts.size()) + " points");
    }
  }
  for (size_t k = 0; k < kernel_generators.size(); ++k) {
    const FieldCtx* L = nullptr;
    const auto pts = mumford_decompose(C, kernel_generators[k], &L);
    auto s = sum_images(D, fr, pts, L);
    if (!s) {
      ++rep.skipped;
      continue;
    }
    if (s->is_zero()) {
      ++rep.kernel_ok;
    } else {
      ++rep.kernel_fail;
      rep.failures.push_back("kernel generator " + std::to_string(k + 1) + " is not annihilated");
    }
  }
  return rep;
}

Genus2Isogeny compute_isogeny_g2(Level2Family& fam, int ell, Rng& rng, const IsogenyOptions& opt) {
  const Curve& C = fam.curve();
  if (C.g != 2) throw std::invalid_argument("compute_isogeny_g2 needs a genus-2 curve");
  Genus2Isogeny out;
  out.recovery = recover_genus2(fam, rng, true);
  std::map<uint32_t, ProjPoint> kd;
  for (const auto& n : out.recovery.nodes.nodes) kd[n.label.mask] = n.p;
  for (const auto& n : out.recovery.nodes.extra) kd[n.label.mask] = n.p;
  const std::vector<Curve> candidates = {out.recovery.D, quadratic_twist(out.recovery.D)};
  std::vector<KummerOpt> models;
  std::vector<ChangeOfVariables> cvs;
  for (const auto& D : candidates) {
    models.emplace_back(D);
    cvs.push_back(find_change_of_variables(kd, models.back()));
  }
  auto L = [](const char* s) { return TwoTorsionLabel::parse(2, s); };
  const std::vector<TwoTorsionLabel> basis = {L("a6"), L("a1"), L("a2"), L("a12")};
  const int N0 = C.g + 2;
  for (int attempt = 0; attempt < opt.max_base_tries; ++attempt) {
    const Point base = random_curve_point(C, C.K, rng);
    try {
      const FormalKummer fk = formal_kummer_images(fam, basis, base, N0 + 2, opt.m);
      std::optional<size_t> chosen;
      FormalImage im;
      for (size_t c = 0; c < candidates.size(); ++c) {
        try {
          FormalImage t = finish_formal_image(fk, cvs[c], models[c]);
          if (chosen) throw Ambiguous("the formal image lifts on both the curve and its twist");
          chosen = c;
          im = t;
        } catch (const NonResidue&) {
        }
      }
      if (!chosen) throw Unresolvable("the formal image lifts on neither the curve nor its twist");
      out.D = candidates[*chosen];
      out.cv = cvs[*chosen];
      out.formal = im;
      FormalState st = decompose_image(C, out.D, im);
      if (st.prec() < N0) throw InsufficientPrecision("formal image lost too much precision");
      out.pullback = solve_pullback_matrix(st);
      extend_precision(st, reconstruction_precision(ell, opt.precision_margin));
      out.fractions = reconstruct(st, degree_bounds_g2(ell));
      return out;
    } catch (const SpecialPoint&) {
    } catch (const LiftFailure&) {
    } catch (const SingularStep&) {
    }
  }
  throw SpecialPoint("no usable base point for the formal image");
}

}  // namespace hyperiso
