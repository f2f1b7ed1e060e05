#include "hyperiso/kernel_etaf.hpp"

#include <algorithm>
#include <map>

namespace hyperiso {

namespace {

std::vector<uint64_t> divisor_key(const Divisor& D) {
  std::vector<uint64_t> k;
  for (const auto* p : {&D.u, &D.v}) {
    k.push_back(static_cast<uint64_t>(p->degree() + 1));
    for (int i = 0; i <= p->degree(); ++i) {
      auto c = (*p)[i].coords();
      k.insert(k.end(), c.begin(), c.end());
    }
  }
  return k;
}

bool is_over(const Divisor& D, const FieldCtx* K) {
  try {
    for (const auto* p : {&D.u, &D.v})
      for (int i = 0; i <= p->degree(); ++i) (void)(*p)[i].descend_to(K);
    return true;
  } catch (const NotASubfield&) {
    return false;
  }
}

Divisor descend_divisor(const Divisor& D, const FieldCtx* K) {
  auto d = [K](const Fq& a) { return a.descend_to(K); };
  return {D.u.map(d), D.v.map(d)};
}

bool series_over(const SeriesDivisor& D, const FieldCtx* K) {
  try {
    for (const auto* p : {&D.u, &D.v})
      for (int i = 0; i <= p->degree(); ++i)
        for (const auto& c : (*p)[i].coeffs()) (void)c.descend_to(K);
    return true;
  } catch (const NotASubfield&) {
    return false;
  }
}

Series series_trace(const Series& s, const FieldCtx* K, const Fq& scale) {
  std::vector<Fq> c;
  for (const auto& a : s.coeffs()) c.push_back(trace_to(a, K) * scale);
  return Series::from_coeffs(K, c, s.prec());
}

/// u - [s(u)] - (deg u - 1)[0], merged by class, zero class kept.
std::vector<std::pair<Divisor, int64_t>> normalized_terms(const Curve& C, const Cycle& c) {
  Cycle full = c;
  full.add(cycle_sum(C, c), -1);
  full.add(zero_divisor(C.K), -(cycle_degree(c) - 1));
  std::vector<std::pair<Divisor, int64_t>> out;
  for (const auto& [u, e] : full.terms) {
    if (e == 0) continue;
    Divisor uu = u.is_zero() ? zero_divisor(C.K) : u;
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& t) { return t.first == uu; });
    if (it == out.end())
      out.push_back({uu, e});
    else
      it->second += e;
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& t) { return t.second == 0; }), out.end());
  return out;
}

}  // namespace

Divisor frobenius(const Divisor& D, const FieldCtx* K) {
  const mpz_class q = K->order;
  auto fr = [&q](const Fq& a) { return a.pow(q); };
  return {D.u.map(fr), D.v.map(fr)};
}

KernelData enumerate_kernel(const Curve& C, const KernelSubgroup& V) {
  if (V.ell < 3 || V.ell % 2 == 0) throw InvalidKernel("kernel prime must be odd");
  if (static_cast<uint64_t>(V.ell) == C.p()) throw InvalidKernel("kernel prime equals the characteristic");
  if (V.generators.empty()) throw InvalidKernel("kernel needs generators");
  KernelData out;
  out.ell = V.ell;
  const FieldCtx* M = C.K;
  for (const auto& T : V.generators) M = common_field(M, divisor_field(T, C.K));
  out.M = M;
  std::vector<Divisor> gens;
  for (const auto& T : V.generators) {
    Divisor Tl = lift_divisor(T, M);
    if (!is_valid(C, Tl)) throw InvalidKernel("generator is not a valid Mumford pair on the curve");
    if (!scalar_mul(C, V.ell, Tl).is_zero()) throw InvalidKernel("generator is not ell-torsion");
    gens.push_back(Tl);
  }
  std::map<std::vector<uint64_t>, size_t> seen;
  std::vector<Divisor> elems{zero_divisor(M)};
  seen[divisor_key(elems[0])] = 0;
  for (const auto& T : gens) {
    const size_t n = elems.size();
    for (size_t i = 0; i < n; ++i) {
      Divisor acc = elems[i];
      for (int c = 1; c < V.ell; ++c) {
        acc = cantor_add(C, acc, T);
        auto key = divisor_key(acc);
        if (!seen.count(key)) {
          seen[key] = elems.size();
          elems.push_back(acc);
        }
      }
    }
  }
  size_t expect = 1;
  for (int i = 0; i < C.g; ++i) expect *= static_cast<size_t>(V.ell);
  if (elems.size() != expect) throw InvalidKernel("generators do not span a subgroup of order ell^g");
  out.elements = elems;
  std::vector<bool> done(elems.size(), false);
  for (size_t i = 0; i < elems.size(); ++i) {
    if (done[i]) continue;
    int size = 0;
    Divisor cur = elems[i];
    while (true) {
      auto it = seen.find(divisor_key(cur));
      if (it == seen.end()) throw InvalidKernel("kernel is not stable under Frobenius");
      if (done[it->second]) break;
      done[it->second] = true;
      ++size;
      cur = frobenius(cur, C.K);
    }
    out.orbits.push_back({i, size});
  }
  return out;
}

Cycle level2_cycle(const Curve& C, const Divisor& a) {
  Cycle c;
  c.add(a, 2).add(zero_divisor(C.K), -2);
  return c;
}

EtafContext::EtafContext(const Curve& C, const KernelData& V, const Cycle& u, const Divisor& y,
                         const EtafOptions& opt)
    : C_(C), V_(V), y_(y), mode_(opt.mode), terms_(normalized_terms(C, u)) {
  const int ell = V_.ell;
  for (size_t i = 0; i < V_.elements.size(); ++i) {
    const Divisor& w = V_.elements[i];
    Divisor wp = scalar_mul(C_, (ell + 1) / 2, w);
    wprime_.push_back(wp);
    Cycle th;
    th.add(wp, ell).add(zero_divisor(C_.K), -ell);
    if (!cycle_sum(C_, th).is_zero() || cycle_degree(th) != 0) throw InvalidKernel("theta cycle is not normalised");
    theta_.push_back(EtaContext::unnormalized(C_, th));
  }
  eta_ = std::make_unique<EtaContext>(C_, u, y_);
  if (opt.phi_u && opt.phi_y) {
    if (!setup(*opt.phi_u, *opt.phi_y)) throw BadBasePoint("phi_u, phi_y meet the support of the auxiliary functions");
    return;
  }
  Rng rng(opt.seed);
  for (int attempt = 0; attempt < opt.max_retries; ++attempt) {
    Divisor pu = random_jacobian_point(C_, rng), py = random_jacobian_point(C_, rng);
    if (setup(pu, py)) return;
  }
  throw BadBasePoint("no admissible phi_u, phi_y found");
}

bool EtafContext::setup(const Divisor& pu, const Divisor& py) {
  const int ell = V_.ell;
  Cycle tc;
  tc.add(scalar_mul(C_, ell - 1, pu), 1).add(negate(pu), ell - 1).add(zero_divisor(C_.K), -ell);
  try {
    tau_ = std::make_unique<EtaContext>(C_, tc, py);
  } catch (const MathError&) {
    return false;
  }
  phi_u_ = pu;
  phi_y_ = py;
  Fq acc(C_.K, 1);
  for (const auto& [ui, e] : terms_) {
    auto v = phi_V(cantor_sub(C_, y_, ui));
    if (!v || v->is_zero()) return false;
    acc = acc * (e > 0 ? v->inv() : *v).pow(static_cast<uint64_t>(e < 0 ? -e : e));
  }
  y_factor_ = acc;
  return true;
}

std::optional<Fq> EtafContext::a_w(size_t idx, const Divisor& x) const {
  std::optional<Fq> theta = Fq(divisor_field(x, C_.K), 1);
  if (idx != 0) {
    Divisor d1 = cantor_sub(C_, x, wprime_[idx]);
    auto n = theta_[idx].raw_value(d1), d = theta_[idx].raw_value(negate(d1));
    calls_->fetch_add(1);
    if (!n || !d || d->is_zero()) return std::nullopt;
    theta = *n * d->inv();
  }
  auto t = tau_->eval(cantor_sub(C_, x, V_.elements[idx]));
  calls_->fetch_add(1);
  if (!t) return std::nullopt;
  return *theta * *t;
}

std::optional<Series> EtafContext::a_w(size_t idx, const SeriesDivisor& x) const {
  try {
    const FieldCtx* F = common_field(series_divisor_field(x), V_.M);
    const int prec = series_divisor_prec(x);
    Series theta = Series::constant(Fq(F, 1), prec);
    if (idx != 0) {
      SeriesDivisor d1 = series_sub(C_, x, wprime_[idx]);
      auto n = theta_[idx].raw_formal(d1), d = theta_[idx].raw_formal(negate_generic(d1));
      calls_->fetch_add(1);
      if (!n || !d) return std::nullopt;
      Series den = n->den * d->num;
      if (!den.is_unit()) return std::nullopt;
      theta = n->num * d->den * den.inv();
    }
    Series t = tau_->eval_formal(series_sub(C_, x, V_.elements[idx]));
    calls_->fetch_add(1);
    return theta.lift_to(common_field(theta.field(), t.field())) * t.lift_to(common_field(theta.field(), t.field()));
  } catch (const MathError&) {
    return std::nullopt;
  }
}

std::optional<Fq> EtafContext::phi_V(const Divisor& x) const {
  const FieldCtx* K = C_.K;
  if (mode_ == KernelMode::Orbit && is_over(x, K)) {
    Divisor xk = descend_divisor(x, K);
    const Fq inv_deg = Fq(K, V_.M->degree / K->degree).inv();
    Fq acc(K, 0);
    for (const auto& orb : V_.orbits) {
      auto a = a_w(orb.rep, xk);
      if (!a) return std::nullopt;
      acc = acc + trace_to(a->lift_to(common_field(a->field(), V_.M)), K) * Fq(K, orb.size) * inv_deg;
    }
    return acc;
  }
  const FieldCtx* F = common_field(divisor_field(x, K), V_.M);
  Fq acc(F, 0);
  for (size_t i = 0; i < V_.elements.size(); ++i) {
    auto a = a_w(i, lift_divisor(x, F));
    if (!a) return std::nullopt;
    acc = acc + *a;
  }
  return acc;
}

std::optional<Series> EtafContext::phi_V(const SeriesDivisor& x) const {
  const FieldCtx* K = C_.K;
  const int prec = series_divisor_prec(x);
  if (mode_ == KernelMode::Orbit && series_over(x, K)) {
    const Fq inv_deg = Fq(K, V_.M->degree / K->degree).inv();
    Series acc = Series::constant(Fq(K, 0), prec);
    for (const auto& orb : V_.orbits) {
      auto a = a_w(orb.rep, x);
      if (!a) return std::nullopt;
      acc = acc + series_trace(a->lift_to(common_field(a->field(), V_.M)), K, Fq(K, orb.size) * inv_deg);
    }
    return acc;
  }
  const FieldCtx* F = common_field(series_divisor_field(x), V_.M);
  Series acc = Series::constant(Fq(F, 0), prec);
  SeriesDivisor xl = lift_series_divisor(x, F);
  for (size_t i = 0; i < V_.elements.size(); ++i) {
    auto a = a_w(i, xl);
    if (!a) return std::nullopt;
    acc = acc + a->lift_to(F);
  }
  return acc;
}

std::optional<Fq> EtafContext::eval(const Divisor& x) const {
  auto e = eta_->eval(x);
  calls_->fetch_add(1);
  if (!e) return std::nullopt;
  Fq acc = e->pow(static_cast<uint64_t>(V_.ell));
  for (const auto& [ui, ex] : terms_) {
    auto v = phi_V(cantor_sub(C_, x, ui));
    if (!v) return std::nullopt;
    if (ex < 0 && v->is_zero()) return std::nullopt;
    acc = acc * (ex < 0 ? v->inv() : *v).pow(static_cast<uint64_t>(ex < 0 ? -ex : ex));
  }
  return acc * y_factor_;
}

std::optional<Series> EtafContext::eval_formal(const SeriesDivisor& x) const {
  try {
    Series e = eta_->eval_formal(x);
    calls_->fetch_add(1);
    Series acc = e.pow(static_cast<uint64_t>(V_.ell));
    for (const auto& [ui, ex] : terms_) {
      auto v = phi_V(series_sub(C_, x, ui));
      if (!v) return std::nullopt;
      Series vv = v->lift_to(common_field(v->field(), acc.field()));
      if (ex < 0 && !vv.is_unit()) return std::nullopt;
      Series f = ex < 0 ? vv.inv() : vv;
      acc = acc.lift_to(common_field(acc.field(), f.field())) * f.pow(static_cast<uint64_t>(ex < 0 ? -ex : ex));
    }
    return acc * y_factor_;
  } catch (const MathError&) {
    return std::nullopt;
  }
}

std::vector<std::optional<Fq>> etaf_batch(const EtafContext& ctx, const std::vector<Divisor>& xs) {
  std::vector<std::optional<Fq>> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(ctx.eval(x));
  return out;
}

}  // namespace hyperiso
