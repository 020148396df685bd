// Acceptance suite: one line per criterion, exit status 0 only if all selected criteria pass.
#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "msf/harness/checks.hpp"
#include "msf/harness/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int criterion = 0;
  std::uint64_t seed = msf::harness::RunConfig{}.seed;
  app.add_option("--criterion", criterion, "run only this criterion (1-12)")
      ->check(CLI::Range(1, msf::harness::kCriterionCount));
  app.add_option("--seed", seed, "random seed for sampled criteria");
  CLI11_PARSE(app, argc, argv);

  const msf::harness::CheckContext ctx{msf::Units{}, seed};
  std::vector<int> ids;
  if (criterion > 0) {
    ids.push_back(criterion);
  } else {
    for (int n = 1; n <= msf::harness::kCriterionCount; ++n) ids.push_back(n);
  }
  bool ok = true;
  for (int n : ids) {
    const auto r = msf::harness::run_criterion(n, ctx);
    std::cout << msf::harness::summary_line(r) << std::endl;
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}
