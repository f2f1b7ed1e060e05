#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "hyperiso/job.hpp"

using namespace hyperiso;
using namespace fixtures;
using nlohmann::json;

namespace {

json load(const std::string& name) {
  std::ifstream in(std::string(HYPERISO_DATA_DIR) + "/" + name);
  REQUIRE(in);
  return json::parse(in);
}

RunOptions quiet(const std::string& command, const std::string& method = "parameterization") {
  set_log_level(LogLevel::error);
  RunOptions o;
  o.command = command;
  o.method = method;
  return o;
}

}  // namespace

TEST_CASE("field elements over a named tower") {
  const json j = {{"p", 1009},
                  {"extensions",
                   {{{"name", "L"}, {"poly", {11, 0, 1}}}, {{"name", "M"}, {"base", "L"}, {"poly", {{0, 1}, 1, 0, 1}}}}}};
  const FieldTable ft = decode_fields(j);
  const FieldCtx* L = ft.at("L");
  const FieldCtx* M = ft.at("M");
  CHECK(L->degree == 2);
  CHECK(M->degree == 6);
  CHECK(M->parent == L);
  const Fq w = decode_element(json{0, 1}, L);
  CHECK(w * w == Fq(L, -11));
  Rng rng(3);
  for (const FieldCtx* F : {ft.K, L, M})
    for (int i = 0; i < 10; ++i) {
      const Fq a = random_element(F, rng);
      CHECK(decode_element(encode_element(a), F) == a);
    }
  // Tower coordinates: (c0 + c1 w) + (c2 + c3 w) z + ... with z the generator of M over L.
  const Fq z = decode_element(json{0, 0, 1, 0, 0, 0}, M);
  CHECK(z * z * z + z + w.lift_to(M) == Fq(M, 0));
  CHECK(decode_element(json{0, 1, 0, 0, 0, 0}, M) == w.lift_to(M));
  CHECK(decode_element(json(-1), ft.K) == Fq(ft.K, 1008));
  CHECK(decode_element(json("123456789012345678901234567890"), ft.K) ==
        Fq(ft.K, mpz_class(mpz_class("123456789012345678901234567890") % 1009).get_si()));
  CHECK_THROWS_AS(decode_element(json{1, 2, 3}, L), JobError);
  CHECK_THROWS_AS(decode_fields(json{{"p", 1001}}), JobError);
  CHECK_THROWS_AS(decode_fields(json{{"p", 1009}, {"extensions", {{{"name", "L"}, {"poly", {1, 0, 1}}}}}}), JobError);
  CHECK_THROWS_AS(decode_fields(json{{"p", 1009}, {"extensions", {{{"name", "L"}, {"poly", {11, 0, 2}}}}}}), JobError);
}

TEST_CASE("job validation") {
  const json good = load("golden_g2.json");
  CHECK(good == golden_job());
  const Job job = parse_job(good);
  CHECK(job.C.f == golden_curve().f);
  CHECK(job.kernel.size() == 2u);
  CHECK(job.kernel[0] == golden_T1());

  json bad = good;
  bad["kernel"][0] = good["y"];
  try {
    parse_job(bad);
    FAIL("non-torsion kernel accepted");
  } catch (const JobError& e) {
    CHECK(std::string(e.what()).find("3-torsion") != std::string::npos);
  }
  bad = good;
  bad["kernel"][0]["v"][0] = 274;
  CHECK_THROWS_AS(parse_job(bad), JobError);
  bad = good;
  bad["curve_f"] = {1, 2, 3, 4, 5, 6, 1};
  CHECK_THROWS_AS(parse_job(bad), UnsupportedJob);
  bad = good;
  bad["curve_f"] = {0, 0, 1, 0, 0, 1};
  CHECK_THROWS_AS(parse_job(bad), JobError);
  bad = good;
  bad.erase("curve_f");
  CHECK_THROWS_AS(parse_job(bad), JobError);
  bad = good;
  bad.erase("phi_y");
  CHECK_THROWS_AS(parse_job(bad), JobError);
  bad = good;
  bad["ell"] = 4;
  CHECK_THROWS_AS(parse_job(bad), JobError);
  bad = good;
  bad["kernel"] = json::array({good["kernel"][0]});
  CHECK_THROWS_AS(run_job(parse_job(bad), quiet("isogenous-curve")), JobError);
}

TEST_CASE("isogenous-curve on the F_1009 job") {
  const Job job = parse_job(golden_job());
  const json r = run_job(job, quiet("isogenous-curve"));
  CHECK(r["kummer"]["tropes"]["a34"] == json{0, 953, 55, 2});
  CHECK(r["kummer"]["tropes"]["a35"] == json{0, 806, 131, 73});
  CHECK(r["kummer"]["tropes"]["a45"] == json{0, 894, 123, 1002});
  CHECK(r["kummer"]["nodes"]["a3"] == json{0, 947, 689, 1});
  CHECK(r["kummer"]["nodes"]["a4"] == json{0, 304, 71, 1});
  CHECK(r["kummer"]["nodes"]["a5"] == json{0, 869, 468, 1});
  CHECK(r["instrumentation"]["eta_f_evaluations"]["curve_recovery"] == 11);
  CHECK(r["twist"]["resolved"] == true);
  const Curve D(job.C.K, decode_poly(r["curve_d"], job.C.K));
  const Curve want(job.C.K, product_of_linears({Fq(job.C.K, 0), Fq(job.C.K, 62), Fq(job.C.K, 705),
                                                Fq(job.C.K, 140), Fq(job.C.K, 37)},
                                               job.C.K));
  CHECK(hyperelliptic_isomorphic(D, want));
  CHECK(jacobian_order_naive(D) == jacobian_order_naive(job.C));
  CHECK_FALSE(r["instrumentation"].contains("timings_ms"));
  CHECK(run_job(job, quiet("isogenous-curve")).dump() == r.dump());

  const json rr = run_job(job, quiet("rosenhain"));
  const Curve R(job.C.K, decode_poly(rr["curve_d"], job.C.K));
  CHECK(hyperelliptic_isomorphic(R, want));
  CHECK(rr["rosenhain"]["r"].size() == 3u);
  CHECK(run_job(job, quiet("isogenous-curve", "rosenhain"))["curve_d"] == rr["curve_d"]);
  CHECK_THROWS_AS(run_job(job, quiet("isogenous-curve", "theta")), JobError);
}

TEST_CASE("fractions and verify through the job interface") {
  const Job job = parse_job(golden_job());
  RunOptions o = quiet("fractions");
  o.samples = 20;
  const json r = run_job(job, o);
  CHECK(r["verify"]["passed"] == true);
  CHECK(r["instrumentation"]["eta_f_evaluations"]["curve_recovery"] == 13);
  CHECK(r["instrumentation"]["eta_f_evaluations"]["formal_image"] == 9);
  REQUIRE(r["fractions"].size() == 4u);
  CHECK(r["fractions"][0]["name"] == "S");

  json vj = golden_job();
  vj["curve_d"] = r["curve_d"];
  vj["fractions"] = r["fractions"];
  RunOptions v = quiet("verify");
  v.samples = 20;
  CHECK(run_job(parse_job(vj), v)["verify"]["passed"] == true);
  vj["fractions"][1]["num"][0] = vj["fractions"][1]["num"][0].get<int>() + 1;
  CHECK(run_job(parse_job(vj), v)["verify"]["passed"] == false);
  vj["fractions"].erase(1);
  CHECK_THROWS_AS(parse_job(vj), JobError);

  const Job g3 = parse_job(load("g3_verify.json"));
  CHECK(g3.C.g == 3);
  CHECK(run_job(g3, v)["verify"]["passed"] == true);
  CHECK_THROWS_AS(run_job(g3, quiet("fractions")), UnsupportedJob);
  CHECK_THROWS_AS(run_job(g3, quiet("rosenhain")), UnsupportedJob);
}

TEST_CASE("reconstruct-quartic input") {
  const json in = {{"p", 10007}, {"alpha", {{3, 7, 11}, {5, 2, 9}, {13, 4, 6}}}};
  const json r = run_reconstruct_quartic(in);
  CHECK(r["all_bitangent"] == true);
  CHECK(r["lines"].size() == 7u);
  CHECK_THROWS_AS(run_reconstruct_quartic(json{{"p", 10007}, {"alpha", {{1, 1}, {1, 1}}}}), JobError);
  CHECK_THROWS_AS(run_reconstruct_quartic(json{{"p", 10007}, {"alpha", {{1, 1, 1}, {1, 1, 1}, {1, 2, 3}}}}), JobError);
}
