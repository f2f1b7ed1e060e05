#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hyperiso/instance.hpp"
#include "hyperiso/job.hpp"

using namespace hyperiso;
using nlohmann::json;

int main(int argc, char** argv) {
  CLI::App app{"Writes a genus-2 job with a Frobenius-stable isotropic (ell, ell) kernel"};
  uint64_t p = 100019, seed = 1;
  int ell = 7, max_degree = 6, max_curves = 20000;
  std::string out = "-";
  app.add_option("--p", p, "prime");
  app.add_option("--ell", ell, "odd prime ell");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--max-degree", max_degree, "largest extension degree of the kernel field");
  app.add_option("--max-curves", max_curves, "curves to try");
  app.add_option("--out", out, "job file (standard output when absent)");
  CLI11_PARSE(app, argc, argv);

  Rng rng(seed);
  const auto inst = random_kernel_instance(prime_field(p), ell, max_degree, rng, max_curves);
  if (!inst) {
    std::cerr << "no suitable curve found\n";
    return 1;
  }
  std::cerr << "eigenvalues " << inst->lambda1 << ", " << inst->lambda2 << " over degree " << inst->M->degree << "\n";
  const json job = instance_job(*inst);
  const std::string text = job.dump(2) + "\n";
  if (out == "-") {
    std::cout << text;
  } else {
    std::ofstream(out) << text;
  }
  return 0;
}
