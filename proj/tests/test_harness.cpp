#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "msf/errors.hpp"
#include "msf/harness/checks.hpp"
#include "msf/harness/config.hpp"
#include "msf/harness/runs.hpp"

using namespace msf::harness;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("msf_test_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(f, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("config: defaults, partial blocks and round trip") {
  const auto c = config_from_json(json::parse(R"({
    "scenario": "coherent",
    "flux": {"l0": -1, "mu": 0.25},
    "coherent": {"j": 0, "z1": [1.5, -0.5], "z2": 2.0},
    "seed": 7
  })"));
  CHECK(c.scenario == Scenario::coherent);
  CHECK(c.flux.l0 == -1);
  CHECK(c.flux.mu == 0.25);
  CHECK(c.coherent.j == 0);
  CHECK(c.coherent.z1 == std::complex<double>(1.5, -0.5));
  CHECK(c.coherent.z2 == std::complex<double>(2.0, 0.0));
  CHECK(c.seed == 7u);
  CHECK(c.spectrum.m_max == RunConfig{}.spectrum.m_max);

  const auto back = config_from_json(config_to_json(c));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("config: flux given as a number of quanta") {
  const auto c = config_from_json(json::parse(R"({"flux": {"flux_quanta": 2.25}})"));
  CHECK(c.flux.l0 + c.flux.mu == doctest::Approx(std::abs(c.flux.flux_quanta)).epsilon(1e-15));
  CHECK(c.flux.mu >= 0.0);
  CHECK(c.flux.mu < 1.0);
}

TEST_CASE("config: invalid input is rejected") {
  const char* bad[] = {
      R"({"flux": {"mu": 1.2}})",
      R"({"flux": {"mu": -0.1}})",
      R"({"flux": {"flux_quanta": 1.0, "mu": 0.5}})",
      R"({"unknown": 1})",
      R"({"coherent": {"j": 2}})",
      R"({"coherent": {"zz": 1}})",
      R"({"units": {"hbar": 0}})",
      R"({"units": {"omega": -1}})",
      R"({"scenario": "fly"})",
      R"({"tolerance": {"lattice": 0}})",
      R"({"seed": "abc"})",
      R"({"evolve": {"samples": 0}})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(config_from_json(json::parse(text)), msf::ConfigError);
  }
  const auto path = scratch("badfile") / "missing.json";
  CHECK_THROWS_AS(load_config(path.string()), msf::ConfigError);
}

TEST_CASE("config: hash ignores the output directory and tracks everything else") {
  RunConfig a;
  RunConfig b = a;
  b.output_dir = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.seed = a.seed + 1;
  CHECK(config_hash(a) != config_hash(b));
  b = a;
  b.coherent.z1 += 1e-9;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("runs: CSV files start with the hash line and a header") {
  RunConfig c;
  c.output_dir = scratch("csv").string();
  c.spectrum = {2, -1, 1};
  c.flux = msf::FluxConfig::from_parts(0, 0.3);
  const auto out = run_spectrum(c);
  const auto l = lines(fs::path(c.output_dir) / "levels.csv");
  REQUIRE(l.size() >= 3);
  CHECK(l[0] == "# config_hash=" + config_hash(c) + " version=" + kVersion);
  CHECK(l[1] == "j,m,l,mu,energy_hw,lz_hbar");
  // j=0 rows for l=-1 and j=1 rows for l=0,1, each with m=0..2
  CHECK(l.size() == 2 + 3 * 3);
  for (std::size_t i = 2; i < l.size(); ++i) CHECK(std::count(l[i].begin(), l[i].end(), ',') == 5);
}

TEST_CASE("runs: an empty l range writes header-only files") {
  RunConfig c;
  c.output_dir = scratch("empty").string();
  c.spectrum = {2, 1, 0};
  run_spectrum(c);
  CHECK(lines(fs::path(c.output_dir) / "levels.csv").size() == 2);
  CHECK(lines(fs::path(c.output_dir) / "splitting.csv").size() == 2);
}

TEST_CASE("runs: repeated runs are byte identical") {
  RunConfig c;
  c.evolve.samples = 16;
  c.evolve.grid_r = 8;
  c.evolve.grid_phi = 8;
  c.sweep.z1_abs = {2.0, 1.0};
  c.sweep.z2_abs = {1.0};
  for (auto run : {run_coherent, run_evolve, run_sweep, run_classical}) {
    c.output_dir = scratch("det_a").string();
    const auto a = run(c);
    c.output_dir = scratch("det_b").string();
    const auto b = run(c);
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) {
      CAPTURE(a.files[i]);
      CHECK(slurp(a.files[i]) == slurp(b.files[i]));
    }
  }
}

TEST_CASE("runs: sweep rows are sorted by parameter tuple") {
  RunConfig c;
  c.output_dir = scratch("sweep").string();
  c.sweep.sectors = {1, 0};
  c.sweep.mu = {0.5, 0.0};
  c.sweep.z1_abs = {2.0, 1.0};
  c.sweep.z2_abs = {1.0};
  run_sweep(c);
  const auto l = lines(fs::path(c.output_dir) / "sweep.csv");
  REQUIRE(l.size() == 2 + 8);
  std::vector<std::array<double, 4>> keys;
  for (std::size_t i = 2; i < l.size(); ++i) {
    std::array<double, 4> k{};
    std::sscanf(l[i].c_str(), "%lf,%lf,%lf,%lf", &k[0], &k[1], &k[2], &k[3]);
    keys.push_back(k);
  }
  CHECK(std::is_sorted(keys.begin(), keys.end()));
}

TEST_CASE("runs: evolve spread density integrates to one") {
  RunConfig c;
  c.output_dir = scratch("spread").string();
  c.evolve.samples = 4;
  c.evolve.grid_r = 120;
  c.evolve.grid_phi = 90;
  run_evolve(c);
  const auto l = lines(fs::path(c.output_dir) / "spread.csv");
  REQUIRE(l.size() == 2 + 120 * 90);
  double r_max = 0.0, total = 0.0;
  for (std::size_t i = 2; i < l.size(); ++i) {
    double r, phi, x, y, d;
    std::sscanf(l[i].c_str(), "%lf,%lf,%lf,%lf,%lf", &r, &phi, &x, &y, &d);
    r_max = std::max(r_max, r);
    total += d * r;
  }
  const double dr = r_max / 119.5, dphi = 2.0 * std::numbers::pi / 90.0;
  CHECK(total * dr * dphi == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("fit_circle recovers centre and radius") {
  std::vector<double> x, y, t;
  for (int i = 0; i < 40; ++i) {
    const double a = 0.3 + 2.0 * std::numbers::pi * i / 40.0;
    t.push_back(a / 1.7);
    x.push_back(-1.0 + 2.5 * std::cos(a));
    y.push_back(0.5 + 2.5 * std::sin(a));
  }
  const auto f = fit_circle(x, y);
  CHECK(f.cx == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(f.cy == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.radius == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(f.residual < 1e-12);
  CHECK(angular_frequency(t, x, y, f.cx, f.cy) == doctest::Approx(1.7).epsilon(1e-10));
}
