#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hyperiso/instance.hpp"
#include "hyperiso/isogeny.hpp"

namespace hyperiso {

namespace exit_code {
constexpr int success = 0;
constexpr int validation = 2;
constexpr int pipeline = 3;
constexpr int unsupported = 4;
}  // namespace exit_code

/// Malformed job or inputs that fail a mathematical precondition (exit 2).
struct JobError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Valid input outside what the pipeline implements (exit 4).
struct UnsupportedJob : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// The pipeline gave up after its retries, or verification failed (exit 3).
struct PipelineFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };
void set_log_level(LogLevel level);
LogLevel parse_log_level(const std::string& s);
/// Writes "[level] message" to standard error when level is enabled.
void log_message(LogLevel level, const std::string& msg);

/// Named field levels of a job: "Fp" (alias "K") and each extension.
struct FieldTable {
  const FieldCtx* K = nullptr;
  std::map<std::string, const FieldCtx*> levels;
  const FieldCtx* at(const std::string& name) const;
};

/// Integer, decimal string, or coordinate array in the tower basis (parent blocks per power of the generator).
Fq decode_element(const nlohmann::json& j, const FieldCtx* F);
/// Ascending coefficient array.
PolyF decode_poly(const nlohmann::json& j, const FieldCtx* F);
nlohmann::json encode_element(const Fq& a);
nlohmann::json encode_poly(const PolyF& f);
FieldTable decode_fields(const nlohmann::json& job);

struct Job {
  FieldTable fields;
  Curve C;
  int ell = 0;
  std::vector<Divisor> kernel;
  std::optional<Divisor> y, phi_u, phi_y;
  std::optional<mpz_class> jacobian_order;
  std::optional<IsogenyFractions> fractions;
  std::optional<Curve> curve_d;
};

/// Validates the schema, the curve, and the kernel generators (Mumford validity and ell-torsion).
Job parse_job(const nlohmann::json& j);

struct RunOptions {
  std::string command = "isogenous-curve";
  std::string method = "parameterization";
  uint64_t seed = 0;
  int retries = 32;
  int threads = 1;
  int precision_margin = 4;
  int samples = 100;
  bool timings = false;
};

/// isogenous-curve, fractions, verify or rosenhain on a parsed job; the result object on success.
nlohmann::json run_job(const Job& job, const RunOptions& opt);
/// The quartic from a 3x3 alpha matrix {"p", "alpha"} with the bitangency check of the seven lines.
nlohmann::json run_reconstruct_quartic(const nlohmann::json& input);
/// Job of the genus-2 example over F_1009 with its reference inputs.
nlohmann::json golden_job();
/// Job for a generated kernel instance, with its Jacobian order and the kernel field as extension "M".
nlohmann::json instance_job(const KernelInstance& inst);

}  // namespace hyperiso
