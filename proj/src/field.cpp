#include "hyperiso/field.hpp"

#include <deque>
#include <map>
#include <mutex>
#include <sstream>

#include "hyperiso/factor.hpp"

namespace hyperiso {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
  if (p < (1ULL << 32)) return a * b % p;
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

uint64_t invmod(uint64_t a, uint64_t p) {
  int64_t t = 0, nt = 1;
  int64_t r = static_cast<int64_t>(p), nr = static_cast<int64_t>(a % p);
  if (nr == 0) throw NonUnit("inverse of zero in F_p");
  while (nr) {
    int64_t q = r / nr;
    int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += static_cast<int64_t>(p);
  return static_cast<uint64_t>(t);
}

bool is_probable_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}
std::deque<std::unique_ptr<FieldCtx>>& registry() {
  static std::deque<std::unique_ptr<FieldCtx>> r;
  return r;
}
std::map<std::pair<const FieldCtx*, std::vector<uint64_t>>, const FieldCtx*>& extension_cache() {
  static std::map<std::pair<const FieldCtx*, std::vector<uint64_t>>, const FieldCtx*> c;
  return c;
}

using Vec = std::vector<uint64_t>;
using Mat = std::vector<Vec>;

// Solves A x = b over F_p for square invertible A (rows of A). Returns nullopt if singular.
std::optional<Vec> solve_mod_p(Mat A, Vec b, uint64_t p) {
  const size_t n = A.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && A[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    uint64_t inv = invmod(A[col][col], p);
    for (size_t j = col; j < n; ++j) A[col][j] = mulmod(A[col][j], inv, p);
    b[col] = mulmod(b[col], inv, p);
    for (size_t r = 0; r < n; ++r) {
      if (r == col || A[r][col] == 0) continue;
      uint64_t f = A[r][col];
      for (size_t j = col; j < n; ++j) A[r][j] = (A[r][j] + p - mulmod(f, A[col][j], p)) % p;
      b[r] = (b[r] + p - mulmod(f, b[col], p)) % p;
    }
  }
  return b;
}

// Multiplies two coordinate vectors modulo the monic modulus m of degree k.
void mul_coords(const uint64_t* a, const uint64_t* b, uint64_t* out, const FieldCtx& F) {
  const int k = F.degree;
  const uint64_t p = F.p;
  unsigned __int128 acc[2 * kMaxDegree - 1] = {};
  for (int i = 0; i < k; ++i) {
    if (!a[i]) continue;
    for (int j = 0; j < k; ++j) acc[i + j] += static_cast<unsigned __int128>(a[i]) * b[j];
  }
  uint64_t t[2 * kMaxDegree - 1];
  for (int i = 0; i < 2 * k - 1; ++i) t[i] = static_cast<uint64_t>(acc[i] % p);
  for (int i = 2 * k - 2; i >= k; --i) {
    const uint64_t f = t[i];
    if (!f) continue;
    for (int j = 0; j < k; ++j) {
      t[i - k + j] = (t[i - k + j] + p - mulmod(f, F.modulus[j], p)) % p;
    }
    t[i] = 0;
  }
  for (int i = 0; i < k; ++i) out[i] = t[i];
}

FieldCtx* register_ctx(std::unique_ptr<FieldCtx> ctx) {
  FieldCtx* raw = ctx.get();
  registry().push_back(std::move(ctx));
  return raw;
}

std::string auto_name(const FieldCtx* base, int deg) {
  std::ostringstream os;
  os << "F_" << base->p << "^" << deg << "#" << registry().size();
  return os.str();
}

}  // namespace

bool FieldCtx::is_ancestor_of(const FieldCtx* other) const {
  for (const FieldCtx* f = other; f; f = f->parent)
    if (f == this) return true;
  return false;
}

std::optional<std::vector<uint64_t>> FieldCtx::descend_coords(const std::vector<uint64_t>& c) const {
  if (!parent) return c;
  const int kp = parent->degree;
  // Overdetermined system sum_i a_i * parent_basis[i] = c; row-reduce the augmented matrix.
  Mat aug(degree, Vec(kp + 1));
  for (int r = 0; r < degree; ++r) {
    for (int i = 0; i < kp; ++i) aug[r][i] = parent_basis[i][r];
    aug[r][kp] = c[r] % p;
  }
  int row = 0;
  std::vector<int> pivcol;
  for (int col = 0; col < kp && row < degree; ++col) {
    int piv = row;
    while (piv < degree && aug[piv][col] == 0) ++piv;
    if (piv == degree) continue;
    std::swap(aug[piv], aug[row]);
    uint64_t inv = invmod(aug[row][col], p);
    for (int j = 0; j <= kp; ++j) aug[row][j] = mulmod(aug[row][j], inv, p);
    for (int r = 0; r < degree; ++r) {
      if (r == row || aug[r][col] == 0) continue;
      uint64_t f = aug[r][col];
      for (int j = 0; j <= kp; ++j) aug[r][j] = (aug[r][j] + p - mulmod(f, aug[row][j], p)) % p;
    }
    pivcol.push_back(col);
    ++row;
  }
  for (int r = row; r < degree; ++r)
    if (aug[r][kp] != 0) return std::nullopt;
  Vec out(kp, 0);
  for (int r = 0; r < row; ++r) out[pivcol[r]] = aug[r][kp];
  return out;
}

const FieldCtx* prime_field(uint64_t p) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  static std::map<uint64_t, const FieldCtx*> cache;
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  if (p == 2 || !is_probable_prime(p)) throw std::invalid_argument("field modulus must be an odd prime");
  if (p >= (1ULL << 62)) throw std::invalid_argument("field modulus too large");
  auto ctx = std::make_unique<FieldCtx>();
  ctx->p = p;
  ctx->degree = 1;
  ctx->modulus = {0, 1};
  ctx->name = "F_" + std::to_string(p);
  ctx->order = mpz_class(std::to_string(p));
  ctx->tower_gen = {0};
  const FieldCtx* raw = register_ctx(std::move(ctx));
  cache[p] = raw;
  return raw;
}

const FieldCtx* common_field(const FieldCtx* a, const FieldCtx* b) {
  if (a == b) return a;
  if (!a || !b) return nullptr;
  if (a->p != b->p) return nullptr;
  if (a->is_ancestor_of(b)) return b;
  if (b->is_ancestor_of(a)) return a;
  return nullptr;
}


const FieldCtx* absolute_field(uint64_t p, const std::vector<uint64_t>& monic_modulus, const std::string& name) {
  const FieldCtx* Fp = prime_field(p);
  std::vector<Fq> c;
  for (uint64_t v : monic_modulus) c.emplace_back(Fp, static_cast<int64_t>(v % p));
  return extend_field(Fp, c, name);
}

const FieldCtx* extend_field(const FieldCtx* base, const std::vector<Fq>& monic_poly, const std::string& name) {
  const int n = static_cast<int>(monic_poly.size()) - 1;
  if (n < 1) throw std::invalid_argument("extension polynomial must have positive degree");
  std::vector<Fq> poly;
  for (const auto& a : monic_poly) poly.push_back(a.lift_to(base));
  if (!poly.back().is_one()) throw std::invalid_argument("extension polynomial must be monic");
  if (n == 1) return base;
  const int D = base->degree * n;
  if (D > kMaxDegree) throw std::invalid_argument("extension degree exceeds supported maximum");

  std::vector<uint64_t> key;
  for (const auto& a : poly)
    for (int i = 0; i < base->degree; ++i) key.push_back(a.coord(i));
  {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = extension_cache().find({base, key});
    if (it != extension_cache().end()) return it->second;
  }
  Poly<Fq> m(poly);
  if (!is_irreducible_poly(m)) throw std::invalid_argument("extension polynomial is not irreducible");

  const uint64_t p = base->p;
  const int kb = base->degree;
  auto ctx = std::make_unique<FieldCtx>();
  ctx->p = p;
  ctx->degree = D;
  ctx->parent = base;
  ctx->relative_degree = n;
  ctx->order = base->order;
  mpz_pow_ui(ctx->order.get_mpz_t(), base->order.get_mpz_t(), n);

  if (kb == 1) {
    ctx->modulus.resize(n + 1);
    for (int i = 0; i <= n; ++i) ctx->modulus[i] = poly[i].coord(0);
    Vec one(D, 0);
    one[0] = 1;
    ctx->parent_basis = {one};
    ctx->tower_gen.assign(D, 0);
    ctx->tower_gen[1] = 1;
  } else {
    // Work in A = base[z]/(m); elements are vectors of n base elements.
    auto to_vec = [&](const std::vector<Fq>& a) {
      Vec v(D, 0);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < kb; ++i) v[j * kb + i] = a[j].coord(i);
      return v;
    };
    auto mulA = [&](const std::vector<Fq>& a, const std::vector<Fq>& b) {
      Poly<Fq> r = (Poly<Fq>(a) * Poly<Fq>(b)) % m;
      std::vector<Fq> out(n, Fq(base, 0));
      for (int j = 0; j <= r.degree(); ++j) out[j] = r[j];
      return out;
    };
    const Fq beta = Fq::generator(base);
    std::vector<Fq> zA(n, Fq(base, 0)), betaA(n, Fq(base, 0)), oneA(n, Fq(base, 0));
    zA[1] = Fq(base, 1);
    betaA[0] = beta;
    oneA[0] = Fq(base, 1);
    bool done = false;
    for (int c = 0; c < 1000 && !done; ++c) {
      std::vector<Fq> alpha = zA;
      alpha[0] = beta * Fq(base, c);
      std::vector<std::vector<Fq>> pw{oneA};
      for (int i = 1; i <= D; ++i) pw.push_back(mulA(pw.back(), alpha));
      Mat A(D, Vec(D));
      for (int i = 0; i < D; ++i) {
        Vec v = to_vec(pw[i]);
        for (int r = 0; r < D; ++r) A[r][i] = v[r];
      }
      Vec rhs = to_vec(pw[D]);
      for (auto& x : rhs) x = (p - x) % p;
      auto mu = solve_mod_p(A, rhs, p);
      if (!mu) continue;
      ctx->modulus.assign(mu->begin(), mu->end());
      ctx->modulus.push_back(1);
      auto gb = solve_mod_p(A, to_vec(betaA), p);
      auto gz = solve_mod_p(A, to_vec(zA), p);
      ctx->tower_gen = *gz;
      // parent basis images: powers of beta's image, computed in the new field below.
      ctx->parent_basis = {*gb};
      done = true;
    }
    if (!done) throw std::runtime_error("failed to find a primitive element");
  }
  ctx->name = name.empty() ? auto_name(base, D) : name;

  FieldCtx* raw = nullptr;
  {
    std::lock_guard<std::mutex> lock(registry_mutex());
    raw = register_ctx(std::move(ctx));
  }
  if (kb > 1) {
    Fq g = Fq::from_coords(raw, raw->parent_basis[0]);
    Fq cur(raw, 1);
    std::vector<Vec> basis;
    for (int i = 0; i < kb; ++i) {
      basis.push_back(cur.coords());
      cur = cur * g;
    }
    raw->parent_basis = basis;
  }
  {
    std::lock_guard<std::mutex> lock(registry_mutex());
    extension_cache()[{base, key}] = raw;
  }
  return raw;
}

Fq::Fq(const FieldCtx* F, int64_t n) : F_(F) {
  int64_t p = static_cast<int64_t>(F->p);
  int64_t r = n % p;
  if (r < 0) r += p;
  c_[0] = static_cast<uint64_t>(r);
}

Fq Fq::from_coords(const FieldCtx* F, const std::vector<uint64_t>& coords) {
  Fq a(F, 0);
  if (static_cast<int>(coords.size()) > F->degree) {
    for (size_t i = F->degree; i < coords.size(); ++i)
      if (coords[i] % F->p) throw std::invalid_argument("too many coordinates for field level");
  }
  for (int i = 0; i < F->degree && i < static_cast<int>(coords.size()); ++i) a.c_[i] = coords[i] % F->p;
  return a;
}

Fq Fq::generator(const FieldCtx* F) {
  if (F->degree == 1) return Fq(F, 0);
  Fq a(F, 0);
  a.c_[1] = 1;
  return a;
}

std::vector<uint64_t> Fq::coords() const { return std::vector<uint64_t>(c_.begin(), c_.begin() + F_->degree); }

bool Fq::is_zero() const {
  for (int i = 0; i < F_->degree; ++i)
    if (c_[i]) return false;
  return true;
}

bool Fq::is_one() const {
  if (c_[0] != 1) return false;
  for (int i = 1; i < F_->degree; ++i)
    if (c_[i]) return false;
  return true;
}

Fq unify_lift(const Fq& a, const FieldCtx* T) { return a.lift_to(T); }

namespace {
inline const FieldCtx* unify(const FieldCtx* a, const FieldCtx* b) {
  if (a == b) return a;
  if (!a || !b) throw FieldMismatch("operation on uninitialised field element");
  const FieldCtx* c = common_field(a, b);
  if (!c) throw FieldMismatch("field levels " + a->name + " and " + b->name + " are not comparable");
  return c;
}
}  // namespace

Fq Fq::operator+(const Fq& o) const {
  if (F_ != o.F_) {
    const FieldCtx* T = unify(F_, o.F_);
    return lift_to(T) + o.lift_to(T);
  }
  Fq r(*this);
  const uint64_t p = F_->p;
  for (int i = 0; i < F_->degree; ++i) {
    uint64_t s = c_[i] + o.c_[i];
    r.c_[i] = s >= p ? s - p : s;
  }
  return r;
}

Fq Fq::operator-(const Fq& o) const {
  if (F_ != o.F_) {
    const FieldCtx* T = unify(F_, o.F_);
    return lift_to(T) - o.lift_to(T);
  }
  Fq r(*this);
  const uint64_t p = F_->p;
  for (int i = 0; i < F_->degree; ++i) r.c_[i] = c_[i] >= o.c_[i] ? c_[i] - o.c_[i] : c_[i] + p - o.c_[i];
  return r;
}

Fq Fq::operator-() const {
  Fq r(*this);
  const uint64_t p = F_->p;
  for (int i = 0; i < F_->degree; ++i) r.c_[i] = c_[i] ? p - c_[i] : 0;
  return r;
}

Fq Fq::operator*(const Fq& o) const {
  if (F_ != o.F_) {
    if (F_ && o.F_ && F_->p == o.F_->p) {
      if (F_->degree == 1) {
        Fq r(o);
        for (int i = 0; i < o.F_->degree; ++i) r.c_[i] = mulmod(c_[0], o.c_[i], F_->p);
        return r;
      }
      if (o.F_->degree == 1) return o * *this;
    }
    const FieldCtx* T = unify(F_, o.F_);
    return lift_to(T) * o.lift_to(T);
  }
  Fq r;
  r.F_ = F_;
  if (F_->degree == 1) {
    r.c_[0] = mulmod(c_[0], o.c_[0], F_->p);
    return r;
  }
  mul_coords(c_.data(), o.c_.data(), r.c_.data(), *F_);
  return r;
}

bool Fq::operator==(const Fq& o) const {
  if (F_ != o.F_) {
    const FieldCtx* T = unify(F_, o.F_);
    return lift_to(T) == o.lift_to(T);
  }
  for (int i = 0; i < F_->degree; ++i)
    if (c_[i] != o.c_[i]) return false;
  return true;
}

Fq Fq::inv() const {
  if (is_zero()) throw NonUnit("inverse of zero");
  const uint64_t p = F_->p;
  if (F_->degree == 1) {
    Fq r(F_, 0);
    r.c_[0] = invmod(c_[0], p);
    return r;
  }
  // Extended Euclid in F_p[z] between the modulus and this element.
  const FieldCtx* Fp = prime_field(p);
  std::vector<Fq> a, m;
  for (int i = 0; i < F_->degree; ++i) a.emplace_back(Fp, static_cast<int64_t>(c_[i]));
  for (uint64_t v : F_->modulus) m.emplace_back(Fp, static_cast<int64_t>(v));
  auto res = xgcd(Poly<Fq>(a), Poly<Fq>(m), Fq(Fp, 1));
  if (res.g.degree() != 0) throw NonUnit("element not invertible");
  Fq r(F_, 0);
  for (int i = 0; i <= res.s.degree(); ++i) r.c_[i] = res.s[i].coord(0);
  return r;
}

Fq Fq::pow(uint64_t e) const {
  Fq r = one();
  Fq b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

Fq Fq::pow(const mpz_class& e) const {
  if (e < 0) return inv().pow(mpz_class(-e));
  Fq r = one();
  const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = r * r;
    if (mpz_tstbit(e.get_mpz_t(), i)) r = r * *this;
  }
  return r;
}

Fq Fq::lift_to(const FieldCtx* target) const {
  if (target == F_) return *this;
  if (!F_ || !target || F_->p != target->p) throw FieldMismatch("cannot lift across characteristics");
  if (F_->degree == 1) {
    Fq r(target, 0);
    r.c_[0] = c_[0];
    return r;
  }
  std::vector<const FieldCtx*> chain;
  for (const FieldCtx* f = target; f != F_; f = f->parent) {
    if (!f) throw FieldMismatch("target field " + target->name + " does not contain " + F_->name);
    chain.push_back(f);
  }
  Fq cur = *this;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const FieldCtx* child = *it;
    Fq next(child, 0);
    const uint64_t p = child->p;
    for (int i = 0; i < cur.F_->degree; ++i) {
      if (!cur.c_[i]) continue;
      for (int r = 0; r < child->degree; ++r)
        next.c_[r] = (next.c_[r] + mulmod(cur.c_[i], child->parent_basis[i][r], p)) % p;
    }
    cur = next;
  }
  return cur;
}

Fq Fq::descend_to(const FieldCtx* target) const {
  if (target == F_) return *this;
  if (target->degree == 1) {
    for (int i = 1; i < F_->degree; ++i)
      if (c_[i]) throw NotASubfield("element does not lie in the prime field");
    return Fq(target, static_cast<int64_t>(c_[0]));
  }
  Fq cur = *this;
  while (cur.F_ != target) {
    if (!cur.F_->parent) throw NotASubfield("target is not a sublevel");
    auto c = cur.F_->descend_coords(cur.coords());
    if (!c) throw NotASubfield("element does not lie in " + target->name);
    cur = from_coords(cur.F_->parent, *c);
  }
  return cur;
}

Fq Fq::norm_to_prime() const {
  if (F_->degree == 1) return *this;
  mpz_class e = (F_->order - 1) / (F_->p - 1);
  return pow(e).descend_to(prime_field(F_->p));
}

bool Fq::is_square() const {
  if (is_zero()) return true;
  Fq n = norm_to_prime();
  return powmod(n.c_[0], (F_->p - 1) / 2, F_->p) == 1;
}

bool Fq::is_canonical_sign() const {
  for (int i = 0; i < F_->degree; ++i) {
    if (c_[i]) return c_[i] <= (F_->p - 1) / 2;
  }
  return true;
}

bool Fq::canonical_less(const Fq& o) const {
  const FieldCtx* T = unify(F_, o.F_);
  Fq a = lift_to(T), b = o.lift_to(T);
  for (int i = 0; i < T->degree; ++i) {
    if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
  }
  return false;
}

std::optional<Fq> Fq::sqrt() const {
  if (is_zero()) return *this;
  if (!is_square()) return std::nullopt;
  const mpz_class qm1 = F_->order - 1;
  mpz_class t = qm1;
  unsigned s = 0;
  while (mpz_even_p(t.get_mpz_t())) {
    t /= 2;
    ++s;
  }
  // Deterministic non-residue search.
  Fq z = one();
  bool found = false;
  for (int64_t n = (F_->degree == 1 ? 2 : 0); n < 100000 && !found; ++n) {
    Fq cand = F_->degree == 1 ? Fq(F_, n) : generator(F_) + Fq(F_, n);
    if (!cand.is_zero() && !cand.is_square()) {
      z = cand;
      found = true;
    }
  }
  if (!found) throw std::runtime_error("no non-residue found");
  Fq c = z.pow(t);
  Fq x = pow(mpz_class((t + 1) / 2));
  Fq b = pow(t);
  unsigned m = s;
  while (!b.is_one()) {
    unsigned i = 0;
    Fq bb = b;
    while (!bb.is_one()) {
      bb = bb * bb;
      ++i;
    }
    Fq w = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) w = w * w;
    x = x * w;
    c = w * w;
    b = b * c;
    m = i;
  }
  if (!x.is_canonical_sign()) x = -x;
  return x;
}

std::ostream& operator<<(std::ostream& os, const Fq& a) {
  if (!a.F_) return os << "<invalid>";
  if (a.F_->degree == 1) return os << a.c_[0];
  os << "(";
  for (int i = 0; i < a.F_->degree; ++i) os << (i ? "," : "") << a.c_[i];
  return os << ")";
}

Fq trace_to(const Fq& a, const FieldCtx* sub) {
  const FieldCtx* F = a.field();
  if (!sub->is_ancestor_of(F) && !(sub->degree == 1 && sub->p == F->p)) throw NotASubfield("trace target is not a sublevel");
  if (F->degree % sub->degree) throw NotASubfield("degree mismatch in trace");
  const int m = F->degree / sub->degree;
  Fq s = a, cur = a;
  for (int i = 1; i < m; ++i) {
    cur = cur.pow(sub->order);
    s = s + cur;
  }
  return s.descend_to(sub);
}

Fq matrix_trace(const Fq& a) {
  const FieldCtx* F = a.field();
  const FieldCtx* Fp = prime_field(F->p);
  uint64_t t = 0;
  Fq basis = Fq(F, 1);
  const Fq z = Fq::generator(F);
  for (int i = 0; i < F->degree; ++i) {
    Fq col = a * basis;
    t = (t + col.coord(i)) % F->p;
    basis = basis * z;
  }
  return Fq(Fp, static_cast<int64_t>(t));
}

Fq random_element(const FieldCtx* F, Rng& rng) {
  std::vector<uint64_t> c(F->degree);
  for (auto& v : c) v = rng.below(F->p);
  return Fq::from_coords(F, c);
}

}  // namespace hyperiso
