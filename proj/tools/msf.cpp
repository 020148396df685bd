// msf: command-line runner for spectra, classical orbits and coherent states.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "msf/errors.hpp"
#include "msf/harness/config.hpp"
#include "msf/harness/runs.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInvalidConfig = 2;
constexpr int kNumericalFailure = 3;

struct Overrides {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool svg = false;
};

int run(msf::harness::Scenario scenario, const Overrides& o) {
  using namespace msf::harness;
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  cfg.scenario = scenario;
  if (o.out) cfg.output_dir = *o.out;
  if (o.seed) cfg.seed = *o.seed;
  if (o.tol) cfg.tol.lattice = *o.tol;
  if (o.svg) cfg.svg = true;
  cfg.validate();

  const auto result = run_scenario(cfg);
  for (const auto& line : result.summary) std::cout << line << '\n';
  for (const auto& f : result.files) std::cout << "wrote " << f << '\n';
  return result.passed ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Charged particle in a uniform magnetic field with a solenoid flux line"};
  app.set_version_flag("--version", std::string(msf::harness::kVersion));
  app.require_subcommand(1);

  Overrides o;
  std::string out;
  std::uint64_t seed = 0;
  double tol = 0.0;
  struct Sub {
    const char* name;
    const char* help;
    msf::harness::Scenario scenario;
  };
  const Sub subs[] = {
      {"spectrum", "energy levels and their splitting against l", msf::harness::Scenario::spectrum},
      {"classical", "sample one classical orbit", msf::harness::Scenario::classical},
      {"coherent", "means, variances and lattice of one coherent state", msf::harness::Scenario::coherent},
      {"evolve", "time evolution of a coherent state against its classical orbit", msf::harness::Scenario::evolve},
      {"verify", "run the acceptance criteria and internal invariants", msf::harness::Scenario::verify},
      {"sweep", "semiclassical means over a grid of states", msf::harness::Scenario::sweep},
  };
  std::optional<msf::harness::Scenario> chosen;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "random seed for sampled checks");
    sub->add_option("--tol", tol, "lattice truncation tolerance");
    sub->add_flag("--svg", o.svg, "also write SVG plots");
    sub->callback([&chosen, s] { chosen = s.scenario; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidConfig;
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--out")) o.out = out;
    if (sub->count("--seed")) o.seed = seed;
    if (sub->count("--tol")) o.tol = tol;
  }

  try {
    return run(*chosen, o);
  } catch (const msf::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const msf::BranchError& e) {
    std::cerr << "invalid state: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const msf::DomainError& e) {
    std::cerr << "invalid state: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}
