#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "msf/units.hpp"

namespace msf::harness {

inline constexpr const char* kVersion = "0.1.0";

enum class Scenario { spectrum, classical, coherent, evolve, verify, sweep };

const char* scenario_name(Scenario s) noexcept;
Scenario parse_scenario(const std::string& s);

struct SpectrumBlock {
  int m_max = 3;
  int l_min = -3;
  int l_max = 3;
};

struct ClassicalBlock {
  double R = 2.0;
  double Rc = 1.0;
  double psi0 = 0.0;
  double alpha_c = 0.0;
  double pz = 0.0;
  double z0 = 0.0;
  int samples = 200;
  double periods = 1.0;
};

struct CoherentBlock {
  int j = 1;
  std::complex<double> z1{2.0, 0.5};
  std::complex<double> z2{1.0, -0.3};
  double pz = 0.0;
};

struct EvolveBlock {
  int samples = 128;
  double periods = 1.0;
  double spread_t = 0.0;
  int grid_r = 60;
  int grid_phi = 72;
  double r_max = 0.0;  // 0 picks a radius from the state size
};

struct SweepBlock {
  std::vector<int> sectors{0, 1};
  std::vector<double> z1_abs{1.0, 2.0, 3.0};
  std::vector<double> z2_abs{1.0, 2.0, 3.0};
  std::vector<double> mu{0.0, 0.5};
};

struct Tolerances {
  double lattice = 1e-12;
};

struct RunConfig {
  Units units;
  FluxConfig flux;
  Scenario scenario = Scenario::verify;
  SpectrumBlock spectrum;
  ClassicalBlock classical;
  CoherentBlock coherent;
  EvolveBlock evolve;
  SweepBlock sweep;
  std::string output_dir = "out";
  std::uint64_t seed = 20240611;
  Tolerances tol;
  bool svg = false;

  /// Throws ConfigError on any invalid field.
  void validate() const;
};

/// Unknown keys are rejected; missing keys keep their defaults.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::string& path);

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace msf::harness
