#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hyperiso/job.hpp"

using namespace hyperiso;
using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw JobError("cannot open input file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw JobError(std::string("input is not valid JSON: ") + e.what());
  }
}

void write_result(const json& r, const std::string& path) {
  const std::string text = r.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int exit_for(const json& r) {
  if (r.contains("verify") && !r["verify"].value("passed", false)) return exit_code::pipeline;
  if (r.contains("all_bitangent") && !r["all_bitangent"].get<bool>()) return exit_code::pipeline;
  return exit_code::success;
}

bool check(const std::string& name, bool ok) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
  return ok;
}

/// Golden genus-2 job through both methods.
int selftest(const RunOptions& base, const std::string& out_path) {
  const Job job = parse_job(golden_job());
  RunOptions o = base;
  o.command = "isogenous-curve";
  o.method = "parameterization";
  const json a = run_job(job, o);
  o.method = "rosenhain";
  const json b = run_job(job, o);
  const json want_tropes = {{"a34", {0, 953, 55, 2}}, {"a35", {0, 806, 131, 73}}, {"a45", {0, 894, 123, 1002}}};
  const json want_nodes = {{"a3", {0, 947, 689, 1}}, {"a4", {0, 304, 71, 1}}, {"a5", {0, 869, 468, 1}}};
  bool ok = true;
  ok &= check("tropes Z_a34, Z_a35, Z_a45", a["kummer"]["tropes"] == want_tropes);
  bool nodes = true;
  for (const auto& [k, v] : want_nodes.items()) nodes = nodes && a["kummer"]["nodes"][k] == v;
  ok &= check("nodes phi(a3), phi(a4), phi(a5)", nodes);
  const FieldCtx* F = prime_field(1009);
  const Curve want(F, product_of_linears({Fq(F, 0), Fq(F, 62), Fq(F, 705), Fq(F, 140), Fq(F, 37)}, F));
  const Curve Da(F, decode_poly(a["curve_d"], F)), Db(F, decode_poly(b["curve_d"], F));
  ok &= check("parameterization curve", igusa_equivalent(igusa_clebsch(Da), igusa_clebsch(want)));
  ok &= check("parameterization twist",
              a["twist"]["resolved"].get<bool>() && jacobian_order_naive(Da) == jacobian_order_naive(job.C));
  ok &= check("rosenhain curve", hyperelliptic_isomorphic(Db, want));
  ok &= check("eta_f count 11", a["instrumentation"]["eta_f_evaluations"]["curve_recovery"] == 11);
  if (!out_path.empty()) write_result({{"parameterization", a}, {"rosenhain", b}}, out_path);
  return ok ? exit_code::success : exit_code::pipeline;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isogenies of genus-2 and genus-3 hyperelliptic Jacobians over finite fields"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string input, out, method = "parameterization", level = "info";
  RunOptions opt;
  app.add_option("--log-level", level, "error, warn, info or debug")->check(
      CLI::IsMember({"error", "warn", "info", "debug"}));

  auto common = [&](CLI::App* s, bool needs_input) {
    auto* in = s->add_option("--input", input, "job file (JSON)");
    if (needs_input) in->required();
    s->add_option("--out", out, "result file (standard output when absent)");
    s->add_option("--seed", opt.seed, "random seed");
    s->add_option("--retries", opt.retries, "pipeline attempts")->check(CLI::PositiveNumber);
    s->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
    s->add_option("--method", method, "curve recovery method")
        ->check(CLI::IsMember({"parameterization", "rosenhain"}));
    s->add_option("--precision-margin", opt.precision_margin, "extra precision for reconstruction")
        ->check(CLI::NonNegativeNumber);
    s->add_option("--samples", opt.samples, "verification samples")->check(CLI::PositiveNumber);
    s->add_flag("--timings", opt.timings, "include wall-clock timings in the result");
  };
  CLI::App* iso = app.add_subcommand("isogenous-curve", "equation of the isogenous curve");
  CLI::App* frac = app.add_subcommand("fractions", "isogenous curve and the rational fractions, verified");
  CLI::App* ver = app.add_subcommand("verify", "check given fractions between given curves");
  CLI::App* ros = app.add_subcommand("rosenhain", "Rosenhain model from the theta constants");
  CLI::App* quart = app.add_subcommand("reconstruct-quartic", "plane quartic from an Aronhold alpha matrix");
  CLI::App* self = app.add_subcommand("selftest", "genus-2 example over F_1009");
  for (CLI::App* s : {iso, frac, ver, ros, quart}) common(s, true);
  common(self, false);

  CLI11_PARSE(app, argc, argv);
  set_log_level(parse_log_level(level));
  opt.method = method;
  try {
    if (self->parsed()) return selftest(opt, out);
    const json in = read_json(input);
    json result;
    if (quart->parsed()) {
      result = run_reconstruct_quartic(in);
    } else {
      opt.command = app.get_subcommands().front()->get_name();
      result = run_job(parse_job(in), opt);
    }
    write_result(result, out);
    const int code = exit_for(result);
    if (code != exit_code::success) log_message(LogLevel::error, "verification failed");
    return code;
  } catch (const JobError& e) {
    log_message(LogLevel::error, e.what());
    return exit_code::validation;
  } catch (const UnsupportedJob& e) {
    log_message(LogLevel::error, e.what());
    return exit_code::unsupported;
  } catch (const Unsupported& e) {
    log_message(LogLevel::error, e.what());
    return exit_code::unsupported;
  } catch (const PipelineFailure& e) {
    log_message(LogLevel::error, e.what());
    return exit_code::pipeline;
  } catch (const MathError& e) {
    log_message(LogLevel::error, e.what());
    return exit_code::pipeline;
  } catch (const std::exception& e) {
    log_message(LogLevel::error, e.what());
    return exit_code::pipeline;
  }
}
