#include "hyperiso/instance.hpp"

#include <cmath>
#include <numeric>

#include "hyperiso/curve_recovery.hpp"
#include "hyperiso/kernel_etaf.hpp"

namespace hyperiso {

namespace {

mpz_class to_mpz(uint64_t x) { return mpz_class(std::to_string(x)); }

int mod_int(const mpz_class& z, int l) {
  mpz_class r = z % l;
  if (r < 0) r += l;
  return static_cast<int>(r.get_si());
}

int mult_order(int a, int l) {
  int k = 1;
  for (int x = a % l; x != 1; x = x * a % l) ++k;
  return k;
}

Divisor frobenius_image(const Divisor& D) {
  auto fp = [](const PolyF& f) {
    std::vector<Fq> c;
    for (const auto& a : f.coeffs()) c.push_back(a.frobenius());
    return PolyF(c);
  };
  return {fp(D.u), fp(D.v)};
}

}  // namespace

mpz_class FrobeniusPolynomial::jacobian_order(int k) const {
  const mpz_class e[5] = {1, a1, a2, p * a1, p * p};
  std::vector<mpz_class> s(4 * k + 1);
  for (int m = 1; m <= 4 * k; ++m) {
    mpz_class v = 0;
    for (int i = 1; i <= std::min(m - 1, 4); ++i) v += (i % 2 ? 1 : -1) * e[i] * s[m - i];
    if (m <= 4) v += (m % 2 ? 1 : -1) * m * e[m];
    s[m] = v;
  }
  const mpz_class q1 = s[k], q2 = s[2 * k], q3 = s[3 * k], q4 = s[4 * k];
  const mpz_class E1 = q1, E2 = (E1 * q1 - q2) / 2, E3 = (E2 * q1 - E1 * q2 + q3) / 3,
                  E4 = (E3 * q1 - E2 * q2 + E1 * q3 - q4) / 4;
  return 1 - E1 + E2 - E3 + E4;
}

std::vector<std::pair<int, int>> FrobeniusPolynomial::roots_mod(int l) const {
  const std::vector<int> c = {mod_int(p * p, l), mod_int(-p * a1, l), mod_int(a2, l), mod_int(-a1, l), 1};
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < l; ++x) {
    std::vector<int> cur = c;
    int m = 0;
    while (cur.size() > 1) {
      int v = 0;
      for (size_t i = cur.size(); i-- > 0;) v = (v * x + cur[i]) % l;
      if (v != 0) break;
      std::vector<int> q(cur.size() - 1);
      int carry = 0;
      for (size_t i = cur.size() - 1; i-- > 0;) q[i] = carry = (cur[i + 1] + carry * x) % l;
      cur = q;
      ++m;
    }
    if (m > 0) out.push_back({x, m});
  }
  return out;
}

std::vector<uint64_t> power_coefficients(const std::vector<uint64_t>& h, uint64_t k, size_t n, uint64_t p) {
  if (n >= p) throw std::invalid_argument("power_coefficients needs n < p");
  if (h.empty() || h[0] % p == 0) throw std::invalid_argument("power_coefficients needs h(0) != 0");
  std::vector<uint64_t> out(n + 1, 0);
  out[0] = powmod(h[0], k, p);
  const uint64_t inv_h0 = invmod(h[0], p), kk = k % p;
  for (size_t m = 0; m < n; ++m) {
    // h0 (m + 1) c_{m+1} = sum_{i >= 1} h_i (k i - (m + 1 - i)) c_{m+1-i}
    uint64_t acc = 0;
    for (size_t i = 1; i < h.size() && i <= m + 1; ++i) {
      const uint64_t coef = (mulmod(kk, i, p) + p - (m + 1 - i) % p) % p;
      acc = (acc + mulmod(mulmod(h[i], coef, p), out[m + 1 - i], p)) % p;
    }
    out[m + 1] = mulmod(acc, mulmod(inv_h0, invmod((m + 1) % p, p), p), p);
  }
  return out;
}

FrobeniusPolynomial frobenius_polynomial_g2(const Curve& C0, Rng& rng) {
  if (C0.g != 2 || !C0.K->is_prime()) throw std::invalid_argument("frobenius_polynomial_g2 needs genus 2 over F_p");
  const uint64_t p = C0.K->p;
  if (p < 7) throw Unsupported("frobenius_polynomial_g2 needs p >= 7");
  // Move a non-root to 0 so that the forward and reversed recurrences both start from a unit.
  Curve C = C0;
  for (uint64_t c = 0; C.f[0].is_zero(); ++c)
    C = Curve(C0.K, C0.f.compose(PolyF({Fq(C0.K, static_cast<int64_t>(c + 1)), Fq(C0.K, 1)})));
  std::vector<uint64_t> fc;
  for (const auto& c : C.f.coeffs()) fc.push_back(c.coord(0));
  const int d = static_cast<int>(fc.size()) - 1;
  std::vector<uint64_t> rc(fc.rbegin(), fc.rend());

  int64_t sum = 0;
  for (uint64_t x = 0; x < p; ++x) {
    uint64_t v = 0;
    for (size_t i = fc.size(); i-- > 0;) v = (mulmod(v, x, p) + fc[i]) % p;
    if (v != 0) sum += powmod(v, (p - 1) / 2, p) == 1 ? 1 : -1;
  }
  // #C(F_p) = p + 1 + sum = p + 1 - a1 (one point at infinity).
  const mpz_class a1 = -mpz_class(std::to_string(sum));
  const uint64_t k = (p - 1) / 2, top = static_cast<uint64_t>(d) * k;
  const auto hf = power_coefficients(fc, k, p - 1, p);
  const auto hr = power_coefficients(rc, k, top - (2 * p - 2), p);
  auto h = [&](uint64_t n) { return n < p ? hf[n] : hr[top - n]; };
  const uint64_t w11 = h(p - 1), w12 = h(p - 2), w21 = h(2 * p - 1), w22 = h(2 * p - 2);
  const uint64_t tr = (w11 + w22) % p, dt = (mulmod(w11, w22, p) + p - mulmod(w12, w21, p)) % p;
  const mpz_class P = to_mpz(p);
  mpz_class a1m = a1 % P;
  if (a1m < 0) a1m += P;
  if (a1m != to_mpz(tr)) throw MathError("Hasse-Witt trace disagrees with the point count");

  const mpz_class lo = 2 * abs(a1) * static_cast<long>(std::floor(std::sqrt(static_cast<double>(p)))) - 2 * P,
                  hi = a1 * a1 / 4 + 2 * P;
  mpz_class off = (to_mpz(dt) - lo) % P;
  if (off < 0) off += P;
  std::vector<FrobeniusPolynomial> cands;
  for (mpz_class a2 = lo + off; a2 <= hi; a2 += P) {
    FrobeniusPolynomial w{a1, a2, P};
    const mpz_class N = w.jacobian_order(1);
    if (N <= 0) continue;
    bool ok = true;
    for (int i = 0; i < 8 && ok; ++i) ok = scalar_mul(C0, N, random_jacobian_point(C0, rng)).is_zero();
    if (ok) cands.push_back(w);
  }
  if (cands.size() != 1) throw Ambiguous("random points do not single out the Frobenius polynomial");
  return cands[0];
}

Curve random_split_curve(const FieldCtx* K, int g, Rng& rng) {
  std::vector<Fq> r;
  while (static_cast<int>(r.size()) < 2 * g + 1) {
    Fq x(K, static_cast<int64_t>(1 + rng.below(K->p - 1)));
    bool dup = false;
    for (const auto& y : r) dup = dup || y == x;
    if (!dup) r.push_back(x);
  }
  return Curve(K, product_of_linears(r, K));
}

std::optional<KernelInstance> eigen_kernel(const Curve& C, int ell, int max_degree, Rng& rng) {
  FrobeniusPolynomial chi;
  try {
    chi = frobenius_polynomial_g2(C, rng);
  } catch (const Ambiguous&) {
    return std::nullopt;
  }
  const auto rts = chi.roots_mod(ell);
  int total = 0;
  for (const auto& [r, m] : rts) total += m;
  if (total != 4) return std::nullopt;
  const int pm = static_cast<int>(C.K->p % static_cast<uint64_t>(ell));
  int best = 0, L1 = 0, L2 = 0;
  for (size_t i = 0; i < rts.size(); ++i)
    for (size_t j = i; j < rts.size(); ++j) {
      if (i == j && rts[i].second < 2) continue;
      if (rts[i].first * rts[j].first % ell == pm) continue;
      const int k = std::lcm(mult_order(rts[i].first, ell), mult_order(rts[j].first, ell));
      if (k > max_degree || k * C.K->degree > kMaxDegree) continue;
      if (best == 0 || k < best) {
        best = k;
        L1 = rts[i].first;
        L2 = rts[j].first;
      }
    }
  if (best == 0) return std::nullopt;
  const FieldCtx* M = extension_of_degree(C.K, best);
  const Curve CM(M, C.f);
  mpz_class cof = chi.jacobian_order(best);
  while (cof % ell == 0) cof /= ell;
  auto torsion_point = [&] {
    Divisor Q = scalar_mul(CM, cof, random_jacobian_point(CM, rng, M));
    for (Divisor R = scalar_mul(CM, ell, Q); !R.is_zero(); R = scalar_mul(CM, ell, Q)) Q = R;
    return Q;
  };
  auto step = [&](const Divisor& Q, int mu) {
    return cantor_sub(CM, frobenius_image(Q), scalar_mul(CM, static_cast<int64_t>(mu), Q));
  };
  // Onto the generalized lambda-eigenspace, then down to an eigenvector.
  auto project = [&](Divisor Q, int lambda) {
    for (const auto& [r, m] : rts)
      if (r != lambda)
        for (int i = 0; i < m; ++i) Q = step(Q, r);
    if (Q.is_zero()) return Q;
    for (Divisor R = step(Q, lambda); !R.is_zero(); R = step(Q, lambda)) Q = R;
    return Q;
  };
  std::vector<Divisor> gens;
  for (int attempt = 0; attempt < 40 && gens.size() < 2; ++attempt) {
    const Divisor T = project(torsion_point(), gens.empty() ? L1 : L2);
    if (T.is_zero()) continue;
    if (gens.size() == 1 && L1 == L2) {
      bool dependent = false;
      for (int c = 1; c < ell && !dependent; ++c) dependent = scalar_mul(CM, c, gens[0]) == T;
      if (dependent) continue;
    }
    gens.push_back(T);
  }
  if (gens.size() < 2) return std::nullopt;
  try {
    enumerate_kernel(C, {ell, gens});
  } catch (const InvalidKernel&) {
    return std::nullopt;
  }
  return KernelInstance{C, ell, M, gens, chi, L1, L2};
}

std::optional<KernelInstance> random_kernel_instance(const FieldCtx* K, int ell, int max_degree, Rng& rng,
                                                     int max_curves) {
  for (int i = 0; i < max_curves; ++i) {
    auto inst = eigen_kernel(random_split_curve(K, 2, rng), ell, max_degree, rng);
    if (inst) return inst;
  }
  return std::nullopt;
}

}  // namespace hyperiso
