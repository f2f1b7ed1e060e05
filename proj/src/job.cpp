#include "hyperiso/job.hpp"

#include <atomic>
#include <chrono>
#include <iostream>

#include "hyperiso/g3_recovery.hpp"
#include "hyperiso/theta.hpp"

namespace hyperiso {

using nlohmann::json;

namespace {

std::atomic<int> g_log_level{static_cast<int>(LogLevel::info)};

const char* level_name(LogLevel l) {
  switch (l) {
    case LogLevel::error:
      return "error";
    case LogLevel::warn:
      return "warn";
    case LogLevel::info:
      return "info";
    default:
      return "debug";
  }
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw JobError(std::string("missing field '") + key + "'");
  return j.at(key);
}

mpz_class decode_integer(const json& j) {
  if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<uint64_t>()));
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<int64_t>()));
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw JobError("not a base-10 integer: " + j.get<std::string>());
    return z;
  }
  throw JobError("expected an integer, got " + j.dump());
}

Fq prime_element(const json& j, const FieldCtx* F) {
  mpz_class z = decode_integer(j);
  const mpz_class p(std::to_string(F->p));
  z %= p;
  if (z < 0) z += p;
  return Fq(F, static_cast<int64_t>(z.get_ui()));
}

/// Basis of F over F_p: products of the parent's basis with powers of the tower generator.
std::vector<Fq> tower_basis(const FieldCtx* F) {
  if (F->parent == nullptr || F->is_prime()) return {Fq(F, 1)};
  const auto pb = tower_basis(F->parent);
  const Fq gen = Fq::from_coords(F, F->tower_gen);
  std::vector<Fq> out;
  Fq pw(F, 1);
  for (int j = 0; j < F->relative_degree; ++j) {
    for (const auto& b : pb) out.push_back(b.lift_to(F) * pw);
    pw = pw * gen;
  }
  return out;
}

Divisor decode_mumford(const json& j, const FieldTable& ft, const std::string& what) {
  const FieldCtx* F = j.contains("field") ? ft.at(j.at("field").get<std::string>()) : ft.K;
  Divisor D{decode_poly(require(j, "u"), F), decode_poly(require(j, "v"), F)};
  if (D.u.degree() < 0 || !D.u.lead().is_one()) throw JobError(what + ": u must be monic");
  return D;
}

void check_on_jacobian(const Curve& C, const Divisor& D, const std::string& what) {
  if (D.u.degree() > C.g || D.v.degree() >= std::max(D.u.degree(), 1) || !is_valid(C, D))
    throw JobError(what + " is not a reduced Mumford pair on the Jacobian");
}

json label_coords(const ProjPoint& p) {
  json a = json::array();
  for (const auto& c : p) a.push_back(encode_element(c));
  return a;
}

json report_json(const VerifyReport& r) {
  return json{{"validity_ok", r.validity_ok},
              {"validity_fail", r.validity_fail},
              {"homomorphism_ok", r.homomorphism_ok},
              {"homomorphism_fail", r.homomorphism_fail},
              {"kernel_ok", r.kernel_ok},
              {"kernel_fail", r.kernel_fail},
              {"skipped", r.skipped},
              {"failures", r.failures},
              {"passed", r.passed()}};
}

json fractions_json(const IsogenyFractions& fr) {
  json a = json::array();
  const auto& names = IsogenyFractions::names(fr.genus);
  for (size_t i = 0; i < fr.parts.size(); ++i)
    a.push_back({{"name", names[i]}, {"num", encode_poly(fr.parts[i].first)}, {"den", encode_poly(fr.parts[i].second)}});
  return a;
}

/// The candidate among D and its twist whose Jacobian is killed by `order` at random points.
std::optional<Curve> twist_by_order(const Curve& D, const mpz_class& order, Rng& rng) {
  const std::vector<Curve> cand = {D, quadratic_twist(D)};
  std::vector<bool> ok;
  for (const auto& c : cand) {
    bool all = true;
    for (int i = 0; i < 6 && all; ++i) all = scalar_mul(c, order, random_jacobian_point(c, rng)).is_zero();
    ok.push_back(all);
  }
  if (ok[0] == ok[1]) return std::nullopt;
  return ok[0] ? cand[0] : cand[1];
}

struct Clock {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  }
};

struct Attempt {
  Rng rng;
  Divisor y;
  EtafOptions eo;
};

Attempt make_attempt(const Job& job, const RunOptions& opt, int attempt) {
  Rng rng(opt.seed * 0x100000001b3ULL + static_cast<uint64_t>(attempt));
  Attempt a{rng, Divisor{}, EtafOptions{}};
  a.y = job.y ? *job.y : random_jacobian_point(job.C, a.rng);
  a.eo.phi_u = job.phi_u;
  a.eo.phi_y = job.phi_y;
  a.eo.seed = a.rng.next();
  return a;
}

/// Runs body(attempt) until it returns, counting MathError failures as retries.
template <class Body>
void with_retries(const RunOptions& opt, json& instr, Body body) {
  std::string last;
  for (int attempt = 0; attempt < std::max(opt.retries, 1); ++attempt) {
    try {
      body(attempt);
      instr["retries"] = attempt;
      return;
    } catch (const MathError& e) {
      last = e.what();
      log_message(LogLevel::warn, "attempt " + std::to_string(attempt + 1) + " failed: " + last);
    }
  }
  throw PipelineFailure("pipeline failed after " + std::to_string(opt.retries) + " attempts: " + last);
}

KernelData kernel_data(const Job& job) {
  try {
    return enumerate_kernel(job.C, {job.ell, job.kernel});
  } catch (const InvalidKernel& e) {
    throw JobError(std::string("invalid kernel: ") + e.what());
  }
}

/// Twist choice by the given order, or by the naive order of J_C for small genus-2 fields.
void resolve_twist_into(const Job& job, Curve& D, json& out, Rng& rng) {
  std::optional<mpz_class> order = job.jacobian_order;
  std::string how = "jacobian_order";
  if (!order && job.C.g == 2 && job.C.K->p <= (1ULL << 16)) {
    order = jacobian_order_naive(job.C);
    how = "naive_count";
  }
  if (!order) {
    out["twist"] = {{"resolved", false}, {"by", "none"}};
    log_message(LogLevel::warn, "no Jacobian order available; the curve is determined up to its quadratic twist");
    return;
  }
  std::optional<Curve> r = twist_by_order(D, *order, rng);
  if (!r) {
    out["twist"] = {{"resolved", false}, {"by", how}};
    log_message(LogLevel::warn, "the Jacobian order does not separate the curve from its twist");
    return;
  }
  D = *r;
  out["twist"] = {{"resolved", true}, {"by", how}};
}

const std::vector<TwoTorsionLabel>& g2_basis() {
  static const std::vector<TwoTorsionLabel> b = {TwoTorsionLabel::parse(2, "a6"), TwoTorsionLabel::parse(2, "a1"),
                                                 TwoTorsionLabel::parse(2, "a2"), TwoTorsionLabel::parse(2, "a12")};
  return b;
}

json kummer_json(const Algorithm1Result& n) {
  json t = json::object(), nd = json::object();
  for (const auto& tr : n.tropes) t[tr.label.name()] = label_coords(tr.c);
  for (const auto& x : n.nodes) nd[x.label.name()] = label_coords(x.p);
  for (const auto& x : n.extra) nd[x.label.name()] = label_coords(x.p);
  return {{"basis", {"a6", "a1", "a2", "a12"}}, {"tropes", t}, {"nodes", nd}};
}

/// Curve by the parameterization method; fills kummer/instrumentation.
Curve curve_parameterization(const Job& job, const RunOptions& opt, json& out, json& instr, Rng*& rng_out,
                             std::optional<Attempt>& keep) {
  const KernelData kd = kernel_data(job);
  Curve D;
  with_retries(opt, instr, [&](int attempt) {
    keep.emplace(make_attempt(job, opt, attempt));
    Level2Family fam(job.C, kd, keep->y, keep->eo);
    if (job.C.g == 2) {
      Genus2Recovery r = recover_genus2(fam, keep->rng, false);
      out["kummer"] = kummer_json(r.nodes);
      D = r.D;
    } else {
      Genus3Recovery r = recover_genus3(fam, keep->rng);
      D = r.D;
    }
    instr["eta_f_evaluations"] = {{"curve_recovery", fam.evaluations()}, {"total", fam.evaluations()}};
  });
  rng_out = &keep->rng;
  return D;
}

/// Curve in Rosenhain form from the genus-2 theta constants.
Curve curve_rosenhain(const Job& job, const RunOptions& opt, json& out, json& instr, Rng*& rng_out,
                      std::optional<Attempt>& keep) {
  if (job.C.g != 2) throw UnsupportedJob("the rosenhain method is implemented for genus 2");
  const KernelData kd = kernel_data(job);
  Curve D;
  with_retries(opt, instr, [&](int attempt) {
    keep.emplace(make_attempt(job, opt, attempt));
    Level2Family fam(job.C, kd, keep->y, keep->eo);
    const LevelTwoConfiguration conf = full_configuration(fam, keep->rng, g2_basis());
    const auto sym = symplectic_basis(2);
    const auto a0 = find_a0(2, sym);
    if (!a0) throw MathError("no a0 for the symplectic basis");
    const ThetaConstants th = c_constants(conf, *a0, sym);
    const RosenhainResult r = rosenhain(th.squares);
    json fourth = json::object();
    for (const auto& [i, v] : th.squares.fourth) fourth[std::to_string(i)] = encode_element(v);
    out["rosenhain"] = {{"r", {encode_element(r.r[0]), encode_element(r.r[1]), encode_element(r.r[2])}},
                        {"theta_fourth_powers", fourth}};
    D = r.curve;
    instr["eta_f_evaluations"] = {{"curve_recovery", fam.evaluations()}, {"total", fam.evaluations()}};
  });
  rng_out = &keep->rng;
  return D;
}

}  // namespace

void set_log_level(LogLevel level) { g_log_level = static_cast<int>(level); }

LogLevel parse_log_level(const std::string& s) {
  for (LogLevel l : {LogLevel::error, LogLevel::warn, LogLevel::info, LogLevel::debug})
    if (s == level_name(l)) return l;
  throw std::invalid_argument("unknown log level: " + s);
}

void log_message(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) > g_log_level.load()) return;
  std::cerr << "[" << level_name(level) << "] " << msg << '\n';
}

const FieldCtx* FieldTable::at(const std::string& name) const {
  auto it = levels.find(name);
  if (it == levels.end()) throw JobError("unknown field level '" + name + "'");
  return it->second;
}

Fq decode_element(const json& j, const FieldCtx* F) {
  if (!j.is_array()) return prime_element(j, F);
  if (static_cast<int>(j.size()) != F->degree)
    throw JobError("element " + j.dump() + " needs " + std::to_string(F->degree) + " coordinates");
  const auto basis = tower_basis(F);
  Fq acc(F, 0);
  const FieldCtx* Fp = prime_field(F->p);
  for (size_t t = 0; t < basis.size(); ++t) acc = acc + prime_element(j[t], Fp).lift_to(F) * basis[t];
  return acc;
}

PolyF decode_poly(const json& j, const FieldCtx* F) {
  if (!j.is_array()) throw JobError("expected a coefficient array, got " + j.dump());
  std::vector<Fq> c;
  for (const auto& e : j) c.push_back(decode_element(e, F));
  return PolyF(c);
}

json encode_element(const Fq& a) {
  const FieldCtx* F = a.field();
  if (F->is_prime()) return a.coord(0);
  const auto basis = tower_basis(F);
  const int n = F->degree;
  const FieldCtx* Fp = prime_field(F->p);
  Matrix M(n, Vector(n, Fq(Fp, 0)));
  for (int t = 0; t < n; ++t) {
    const auto c = basis[t].coords();
    for (int i = 0; i < n; ++i) M[i][t] = Fq(Fp, static_cast<int64_t>(c[i]));
  }
  Vector rhs;
  for (uint64_t c : a.coords()) rhs.push_back(Fq(Fp, static_cast<int64_t>(c)));
  const auto x = solve(M, rhs);
  json out = json::array();
  for (const auto& v : *x) out.push_back(v.coord(0));
  return out;
}

json encode_poly(const PolyF& f) {
  json a = json::array();
  for (const auto& c : f.coeffs()) a.push_back(encode_element(c));
  return a;
}

FieldTable decode_fields(const json& job) {
  const mpz_class pz = decode_integer(require(job, "p"));
  if (pz < 3 || pz >= mpz_class(1) << 62 || !is_probable_prime(pz.get_ui()))
    throw JobError("p must be an odd prime below 2^62");
  FieldTable ft;
  ft.K = prime_field(pz.get_ui());
  ft.levels["Fp"] = ft.K;
  ft.levels["K"] = ft.K;
  const FieldCtx* prev = ft.K;
  if (job.contains("extensions")) {
    for (const auto& e : job.at("extensions")) {
      const std::string name = require(e, "name").get<std::string>();
      if (ft.levels.count(name)) throw JobError("duplicate field level '" + name + "'");
      const FieldCtx* base = e.contains("base") ? ft.at(e.at("base").get<std::string>()) : prev;
      const PolyF m = decode_poly(require(e, "poly"), base);
      if (m.degree() < 1 || !m.lead().is_one()) throw JobError("extension '" + name + "' needs a monic polynomial");
      if (m.degree() * base->degree > kMaxDegree)
        throw UnsupportedJob("extension '" + name + "' exceeds absolute degree " + std::to_string(kMaxDegree));
      if (!is_irreducible_poly(m)) throw JobError("extension polynomial of '" + name + "' is reducible");
      prev = extend_field(base, m.coeffs(), name);
      ft.levels[name] = prev;
    }
  }
  return ft;
}

Job parse_job(const json& j) {
  if (!j.is_object()) throw JobError("job must be an object");
  Job job;
  job.fields = decode_fields(j);
  const FieldCtx* K = job.fields.K;
  const PolyF f = decode_poly(require(j, "curve_f"), K);
  if (f.degree() >= 0 && f.degree() % 2 == 0)
    throw UnsupportedJob("only imaginary models Y^2 = f(X) with deg f = 2g + 1 are supported, got degree " +
                         std::to_string(f.degree()));
  if (f.degree() != 5 && f.degree() != 7) throw UnsupportedJob("curves of genus 2 or 3 are supported");
  try {
    job.C = Curve(K, f);
  } catch (const std::invalid_argument& e) {
    throw JobError(std::string("curve: ") + e.what());
  }
  if (j.contains("ell")) {
    const mpz_class l = decode_integer(j.at("ell"));
    if (l < 3 || l > 1000 || !is_probable_prime(l.get_ui()) || l == mpz_class(std::to_string(K->p)))
      throw JobError("ell must be an odd prime up to 1000 different from p");
    job.ell = static_cast<int>(l.get_si());
  }
  if (j.contains("kernel")) {
    const auto& ks = j.at("kernel");
    if (!ks.is_array()) throw JobError("kernel must be a list");
    for (size_t i = 0; i < ks.size(); ++i) {
      const std::string what = "kernel generator " + std::to_string(i + 1);
      Divisor T = decode_mumford(ks[i], job.fields, what);
      check_on_jacobian(job.C, T, what);
      if (T.is_zero()) throw JobError(what + " is zero");
      if (job.ell > 0 && !scalar_mul(job.C, job.ell, T).is_zero())
        throw JobError(what + " is not " + std::to_string(job.ell) + "-torsion");
      job.kernel.push_back(T);
    }
  }
  auto opt_div = [&](const char* key) -> std::optional<Divisor> {
    if (!j.contains(key)) return std::nullopt;
    Divisor D = decode_mumford(j.at(key), job.fields, key);
    check_on_jacobian(job.C, D, key);
    if (poly_field(D.u, K) != K || poly_field(D.v, K) != K)
      throw JobError(std::string(key) + " must be defined over the base field");
    return D;
  };
  job.y = opt_div("y");
  job.phi_u = opt_div("phi_u");
  job.phi_y = opt_div("phi_y");
  if (job.phi_u.has_value() != job.phi_y.has_value()) throw JobError("phi_u and phi_y must be given together");
  if (j.contains("jacobian_order")) job.jacobian_order = decode_integer(j.at("jacobian_order"));
  if (j.contains("curve_d")) {
    try {
      job.curve_d = Curve(K, decode_poly(j.at("curve_d"), K));
    } catch (const std::invalid_argument& e) {
      throw JobError(std::string("curve_d: ") + e.what());
    }
    if (job.curve_d->g != job.C.g) throw JobError("curve_d has a different genus");
  }
  if (j.contains("fractions")) {
    IsogenyFractions fr;
    fr.genus = job.C.g;
    std::map<std::string, std::pair<PolyF, PolyF>> by_name;
    for (const auto& e : j.at("fractions")) {
      const std::string name = require(e, "name").get<std::string>();
      by_name[name] = {decode_poly(require(e, "num"), K), decode_poly(require(e, "den"), K)};
      if (by_name[name].second.degree() < 0) throw JobError("fraction " + name + " has a zero denominator");
    }
    for (const auto& n : IsogenyFractions::names(fr.genus)) {
      auto it = by_name.find(n);
      if (it == by_name.end()) throw JobError("fractions: missing part " + n);
      fr.parts.push_back(it->second);
    }
    if (by_name.size() != fr.parts.size()) throw JobError("fractions: unexpected part names");
    job.fractions = fr;
  }
  return job;
}

json run_job(const Job& job, const RunOptions& opt) {
  const Clock clock;
  if (opt.threads > 1) log_message(LogLevel::info, "batch phases run sequentially; --threads is accepted as a hint");
  json out = {{"command", opt.command}, {"genus", job.C.g}, {"p", job.C.K->p}, {"curve_c", encode_poly(job.C.f)}};
  json instr = {{"seed", opt.seed}, {"retries", 0}};
  json timings = json::object();
  const bool isogeny_cmd = opt.command != "verify";
  if (isogeny_cmd) {
    if (job.ell == 0) throw JobError("missing field 'ell'");
    if (job.kernel.empty()) throw JobError("missing field 'kernel'");
    out["ell"] = job.ell;
  }

  if (opt.command == "isogenous-curve" || opt.command == "rosenhain") {
    const std::string method = opt.command == "rosenhain" ? "rosenhain" : opt.method;
    out["method"] = method;
    Rng* rng = nullptr;
    std::optional<Attempt> keep;
    Curve D;
    if (method == "parameterization")
      D = curve_parameterization(job, opt, out, instr, rng, keep);
    else if (method == "rosenhain")
      D = curve_rosenhain(job, opt, out, instr, rng, keep);
    else
      throw JobError("unknown method '" + method + "'");
    timings["curve"] = clock.ms();
    if (job.C.g == 2) {
      resolve_twist_into(job, D, out, *rng);
    } else if (job.jacobian_order) {
      std::optional<Curve> r = twist_by_order(D, *job.jacobian_order, *rng);
      out["twist"] = {{"resolved", r.has_value()}, {"by", "jacobian_order"}};
      if (r) D = *r;
    } else {
      out["twist"] = {{"resolved", false}, {"by", "none"}};
    }
    out["curve_d"] = encode_poly(D.f);
  } else if (opt.command == "fractions") {
    if (job.C.g != 2) throw UnsupportedJob("rational fractions are computed in genus 2 only");
    if (opt.method != "parameterization") throw UnsupportedJob("fractions need the parameterization method");
    out["method"] = "parameterization";
    const KernelData kd = kernel_data(job);
    std::optional<Genus2Isogeny> iso;
    std::optional<Attempt> keep;
    with_retries(opt, instr, [&](int attempt) {
      keep.emplace(make_attempt(job, opt, attempt));
      Level2Family fam(job.C, kd, keep->y, keep->eo);
      IsogenyOptions io;
      io.precision_margin = opt.precision_margin;
      iso = compute_isogeny_g2(fam, job.ell, keep->rng, io);
      instr["eta_f_evaluations"] = {{"curve_recovery", iso->recovery.nodes.evaluations},
                                    {"formal_image", iso->formal.evaluations},
                                    {"total", fam.evaluations()}};
    });
    timings["fractions"] = clock.ms();
    out["kummer"] = kummer_json(iso->recovery.nodes);
    out["twist"] = {{"resolved", true}, {"by", "formal_lift"}};
    out["curve_d"] = encode_poly(iso->D.f);
    out["fractions"] = fractions_json(iso->fractions);
    const VerifyReport rep = verify_isogeny(job.C, iso->D, iso->fractions, job.kernel, opt.samples, keep->rng);
    out["verify"] = report_json(rep);
    timings["verify"] = clock.ms();
  } else if (opt.command == "verify") {
    if (!job.fractions) throw JobError("missing field 'fractions'");
    if (!job.curve_d) throw JobError("missing field 'curve_d'");
    Rng rng(opt.seed);
    const VerifyReport rep = verify_isogeny(job.C, *job.curve_d, *job.fractions, job.kernel, opt.samples, rng);
    out["curve_d"] = encode_poly(job.curve_d->f);
    out["verify"] = report_json(rep);
    timings["verify"] = clock.ms();
  } else {
    throw JobError("unknown command '" + opt.command + "'");
  }
  if (opt.timings) instr["timings_ms"] = timings;
  out["instrumentation"] = instr;
  for (const auto& [k, v] : timings.items()) log_message(LogLevel::info, k + " done after " + v.dump() + " ms");
  return out;
}

json run_reconstruct_quartic(const json& input) {
  const FieldTable ft = decode_fields(input);
  const FieldCtx* F = input.contains("field") ? ft.at(input.at("field").get<std::string>()) : ft.K;
  const json& a = require(input, "alpha");
  if (!a.is_array() || a.size() != 3) throw JobError("alpha must be a 3x3 matrix");
  Matrix alpha;
  for (const auto& row : a) {
    if (!row.is_array() || row.size() != 3) throw JobError("alpha must be a 3x3 matrix");
    Vector r;
    for (const auto& e : row) r.push_back(decode_element(e, F));
    alpha.push_back(r);
  }
  TernaryForm Q;
  try {
    Q = riemann_reconstruct(alpha);
  } catch (const SingularSystem& e) {
    throw JobError(std::string("alpha matrix is degenerate: ") + e.what());
  }
  json mons = json::array();
  for (const auto& [m, c] : Q.coeffs)
    if (!c.is_zero()) mons.push_back({{"monomial", {m[0], m[1], m[2]}}, {"coeff", encode_element(c)}});
  json lines = json::array(), checks = json::array();
  bool all = true;
  for (const auto& l : aronhold_lines(alpha)) {
    lines.push_back({encode_element(l[0]), encode_element(l[1]), encode_element(l[2])});
    const bool b = is_bitangent(Q, l);
    checks.push_back(b);
    all = all && b;
  }
  return {{"command", "reconstruct-quartic"},
          {"quartic", mons},
          {"lines", lines},
          {"bitangent", checks},
          {"all_bitangent", all}};
}

json golden_job() {
  auto pair = [](std::vector<int> u, std::vector<int> v) { return json{{"u", u}, {"v", v}}; };
  return {{"p", 1009},
          {"curve_f", {967, 392, 995, 364, 260, 1}},
          {"ell", 3},
          {"kernel", {pair({513, 714, 1}, {273, 182}), pair({51, 654, 1}, {545, 804})}},
          {"y", pair({637, 425, 1}, {930, 498})},
          {"phi_u", pair({658, 462, 1}, {522, 365})},
          {"phi_y", pair({883, 512, 1}, {148, 827})}};
}

json instance_job(const KernelInstance& inst) {
  json job;
  job["p"] = inst.C.K->p;
  job["ell"] = inst.ell;
  job["curve_f"] = encode_poly(inst.C.f);
  job["jacobian_order"] = inst.chi.jacobian_order(1).get_str();
  std::string field = "Fp";
  if (inst.M->degree > 1) {
    json mod = json::array();
    for (uint64_t c : inst.M->modulus) mod.push_back(c);
    job["extensions"] = json::array({{{"name", "M"}, {"base", "Fp"}, {"poly", mod}}});
    field = "M";
  }
  job["kernel"] = json::array();
  for (const auto& T : inst.generators)
    job["kernel"].push_back({{"field", field}, {"u", encode_poly(T.u)}, {"v", encode_poly(T.v)}});
  return job;
}

}  // namespace hyperiso
