#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <vector>

#include "hyperiso/eta.hpp"

namespace hyperiso {

struct InvalidKernel : MathError {
  using MathError::MathError;
};
struct Unsupported : MathError {
  using MathError::MathError;
};

/// Generators of a maximal isotropic subgroup V of J[ell], possibly over extensions of K.
struct KernelSubgroup {
  int ell = 3;
  std::vector<Divisor> generators;
};

/// All ell^g elements of V over one field M, grouped into Frobenius orbits over K.
struct KernelData {
  int ell = 3;
  const FieldCtx* M = nullptr;
  std::vector<Divisor> elements;  // elements[0] is zero
  struct Orbit {
    size_t rep;  // index into elements
    int size;
  };
  std::vector<Orbit> orbits;
};

/// Validates ell*T = 0, #V = ell^g and Frobenius stability.
KernelData enumerate_kernel(const Curve& C, const KernelSubgroup& V);
/// Coefficient-wise q-power Frobenius with q = #K.
Divisor frobenius(const Divisor& D, const FieldCtx* K);

enum class KernelMode { Orbit, Enumerate };

struct EtafOptions {
  KernelMode mode = KernelMode::Orbit;
  std::optional<Divisor> phi_u, phi_y;
  uint64_t seed = 1;
  int max_retries = 8;
};

/// eta_f[u, y] for the isogeny with kernel V; immutable after construction.
class EtafContext {
 public:
  EtafContext(const Curve& C, const KernelData& V, const Cycle& u, const Divisor& y, const EtafOptions& opt = {});

  std::optional<Fq> phi_V(const Divisor& x) const;
  std::optional<Series> phi_V(const SeriesDivisor& x) const;
  std::optional<Fq> eval(const Divisor& x) const;
  std::optional<Series> eval_formal(const SeriesDivisor& x) const;

  const Curve& curve() const { return C_; }
  const KernelData& kernel() const { return V_; }
  const Divisor& base() const { return y_; }
  const Divisor& phi_u() const { return phi_u_; }
  const Divisor& phi_y() const { return phi_y_; }
  /// Terms u_i with exponents e_i of the normalised cycle, zero class included.
  const std::vector<std::pair<Divisor, int64_t>>& terms() const { return terms_; }
  /// Number of eta evaluations performed so far (theta_w counts once).
  uint64_t eta_calls() const { return calls_->load(); }

 private:
  bool setup(const Divisor& pu, const Divisor& py);
  std::optional<Fq> a_w(size_t idx, const Divisor& x) const;
  std::optional<Series> a_w(size_t idx, const SeriesDivisor& x) const;

  Curve C_;
  KernelData V_;
  Divisor y_, phi_u_, phi_y_;
  KernelMode mode_;
  std::vector<std::pair<Divisor, int64_t>> terms_;
  std::vector<Divisor> wprime_;
  std::vector<EtaContext> theta_;
  std::unique_ptr<EtaContext> tau_, eta_;
  Fq y_factor_;
  std::shared_ptr<std::atomic<uint64_t>> calls_ = std::make_shared<std::atomic<uint64_t>>(0);
};

std::vector<std::optional<Fq>> etaf_batch(const EtafContext& ctx, const std::vector<Divisor>& xs);

/// Cycle 2[a] - 2[0].
Cycle level2_cycle(const Curve& C, const Divisor& a);

}  // namespace hyperiso
