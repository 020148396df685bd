#include "msf/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "msf/errors.hpp"

namespace msf::harness {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

void read_complex(const json& j, const char* key, std::complex<double>& out, const std::string& where) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (v.is_number()) {
    out = v.get<double>();
    return;
  }
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(where + "." + key + ": expected [re, im]");
  }
  out = {v[0].get<double>(), v[1].get<double>()};
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

const char* scenario_name(Scenario s) noexcept {
  switch (s) {
    case Scenario::spectrum:
      return "spectrum";
    case Scenario::classical:
      return "classical";
    case Scenario::coherent:
      return "coherent";
    case Scenario::evolve:
      return "evolve";
    case Scenario::verify:
      return "verify";
    case Scenario::sweep:
      return "sweep";
  }
  return "?";
}

Scenario parse_scenario(const std::string& s) {
  for (Scenario c : {Scenario::spectrum, Scenario::classical, Scenario::coherent, Scenario::evolve,
                     Scenario::verify, Scenario::sweep}) {
    if (s == scenario_name(c)) return c;
  }
  throw ConfigError("unknown scenario '" + s + "'");
}

void RunConfig::validate() const {
  require(finite(units.hbar) && units.hbar > 0 && finite(units.mass) && units.mass > 0 && finite(units.omega) &&
              units.omega > 0,
          "units: hbar, mass and omega must be finite and > 0");
  require(finite(flux.mu) && flux.mu >= 0.0 && flux.mu < 1.0, "flux.mu must lie in [0, 1)");
  require(spectrum.m_max >= 0, "spectrum.m_max must be >= 0");
  require(classical.R >= 0 && classical.Rc >= 0 && finite(classical.R) && finite(classical.Rc),
          "classical: R and Rc must be finite and >= 0");
  require(classical.samples >= 1, "classical.samples must be >= 1");
  require(classical.periods > 0 && finite(classical.periods), "classical.periods must be > 0");
  require(coherent.j == 0 || coherent.j == 1, "coherent.j must be 0 or 1");
  require(finite(std::abs(coherent.z1)) && finite(std::abs(coherent.z2)), "coherent: z1, z2 must be finite");
  require(!(coherent.j == 1 && coherent.z1 == 0.0 && flux.mu > 0.0), "coherent: j=1 with z1=0 and mu>0 is the null state");
  require(!(coherent.j == 0 && coherent.z2 == 0.0), "coherent: j=0 with z2=0 is the null state");
  require(evolve.samples >= 3, "evolve.samples must be >= 3");
  require(evolve.periods > 0 && finite(evolve.periods), "evolve.periods must be > 0");
  require(evolve.grid_r >= 1 && evolve.grid_phi >= 1, "evolve: grid sizes must be >= 1");
  require(evolve.r_max >= 0 && finite(evolve.r_max), "evolve.r_max must be >= 0");
  for (int s : sweep.sectors) require(s == 0 || s == 1, "sweep.sectors entries must be 0 or 1");
  for (double a : sweep.z1_abs) require(a >= 0 && finite(a), "sweep.z1_abs entries must be >= 0");
  for (double a : sweep.z2_abs) require(a >= 0 && finite(a), "sweep.z2_abs entries must be >= 0");
  for (double m : sweep.mu) require(m >= 0 && m < 1, "sweep.mu entries must lie in [0, 1)");
  require(tol.lattice > 0 && tol.lattice < 1e-3, "tolerance.lattice must lie in (0, 1e-3)");
  require(!output_dir.empty(), "output_dir must not be empty");
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  check_keys(j, {"units", "flux", "scenario", "spectrum", "classical", "coherent", "evolve", "sweep", "output_dir",
                 "seed", "tolerance", "svg"},
             "config");
  if (j.contains("units")) {
    const auto& u = j["units"];
    check_keys(u, {"hbar", "mass", "omega"}, "units");
    read(u, "hbar", c.units.hbar, "units");
    read(u, "mass", c.units.mass, "units");
    read(u, "omega", c.units.omega, "units");
  }
  if (j.contains("flux")) {
    const auto& f = j["flux"];
    check_keys(f, {"flux_quanta", "l0", "mu"}, "flux");
    if (f.contains("flux_quanta")) {
      if (f.contains("l0") || f.contains("mu")) throw ConfigError("flux: give either flux_quanta or l0/mu");
      double q = 0.0;
      read(f, "flux_quanta", q, "flux");
      if (!std::isfinite(q)) throw ConfigError("flux.flux_quanta must be finite");
      c.flux = FluxConfig::from_flux(q);
    } else {
      int l0 = 0;
      double mu = 0.0;
      read(f, "l0", l0, "flux");
      read(f, "mu", mu, "flux");
      if (!(mu >= 0.0 && mu < 1.0)) throw ConfigError("flux.mu must lie in [0, 1)");
      c.flux = FluxConfig::from_parts(l0, mu);
    }
  }
  if (j.contains("scenario")) {
    std::string s;
    read(j, "scenario", s, "config");
    c.scenario = parse_scenario(s);
  }
  if (j.contains("spectrum")) {
    const auto& s = j["spectrum"];
    check_keys(s, {"m_max", "l_min", "l_max"}, "spectrum");
    read(s, "m_max", c.spectrum.m_max, "spectrum");
    read(s, "l_min", c.spectrum.l_min, "spectrum");
    read(s, "l_max", c.spectrum.l_max, "spectrum");
  }
  if (j.contains("classical")) {
    const auto& s = j["classical"];
    check_keys(s, {"R", "Rc", "psi0", "alpha_c", "pz", "z0", "samples", "periods"}, "classical");
    read(s, "R", c.classical.R, "classical");
    read(s, "Rc", c.classical.Rc, "classical");
    read(s, "psi0", c.classical.psi0, "classical");
    read(s, "alpha_c", c.classical.alpha_c, "classical");
    read(s, "pz", c.classical.pz, "classical");
    read(s, "z0", c.classical.z0, "classical");
    read(s, "samples", c.classical.samples, "classical");
    read(s, "periods", c.classical.periods, "classical");
  }
  if (j.contains("coherent")) {
    const auto& s = j["coherent"];
    check_keys(s, {"j", "z1", "z2", "pz"}, "coherent");
    read(s, "j", c.coherent.j, "coherent");
    read_complex(s, "z1", c.coherent.z1, "coherent");
    read_complex(s, "z2", c.coherent.z2, "coherent");
    read(s, "pz", c.coherent.pz, "coherent");
  }
  if (j.contains("evolve")) {
    const auto& s = j["evolve"];
    check_keys(s, {"samples", "periods", "spread_t", "grid_r", "grid_phi", "r_max"}, "evolve");
    read(s, "samples", c.evolve.samples, "evolve");
    read(s, "periods", c.evolve.periods, "evolve");
    read(s, "spread_t", c.evolve.spread_t, "evolve");
    read(s, "grid_r", c.evolve.grid_r, "evolve");
    read(s, "grid_phi", c.evolve.grid_phi, "evolve");
    read(s, "r_max", c.evolve.r_max, "evolve");
  }
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    check_keys(s, {"sectors", "z1_abs", "z2_abs", "mu"}, "sweep");
    read(s, "sectors", c.sweep.sectors, "sweep");
    read(s, "z1_abs", c.sweep.z1_abs, "sweep");
    read(s, "z2_abs", c.sweep.z2_abs, "sweep");
    read(s, "mu", c.sweep.mu, "sweep");
  }
  read(j, "output_dir", c.output_dir, "config");
  read(j, "seed", c.seed, "config");
  if (j.contains("tolerance")) {
    const auto& t = j["tolerance"];
    check_keys(t, {"lattice"}, "tolerance");
    read(t, "lattice", c.tol.lattice, "tolerance");
  }
  read(j, "svg", c.svg, "config");
  c.validate();
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["units"] = {{"hbar", c.units.hbar}, {"mass", c.units.mass}, {"omega", c.units.omega}};
  j["flux"] = {{"l0", c.flux.l0}, {"mu", c.flux.mu}};
  j["scenario"] = scenario_name(c.scenario);
  j["spectrum"] = {{"m_max", c.spectrum.m_max}, {"l_min", c.spectrum.l_min}, {"l_max", c.spectrum.l_max}};
  j["classical"] = {{"R", c.classical.R},       {"Rc", c.classical.Rc}, {"psi0", c.classical.psi0},
                    {"alpha_c", c.classical.alpha_c}, {"pz", c.classical.pz}, {"z0", c.classical.z0},
                    {"samples", c.classical.samples}, {"periods", c.classical.periods}};
  j["coherent"] = {{"j", c.coherent.j},
                   {"z1", complex_json(c.coherent.z1)},
                   {"z2", complex_json(c.coherent.z2)},
                   {"pz", c.coherent.pz}};
  j["evolve"] = {{"samples", c.evolve.samples}, {"periods", c.evolve.periods}, {"spread_t", c.evolve.spread_t},
                 {"grid_r", c.evolve.grid_r},   {"grid_phi", c.evolve.grid_phi}, {"r_max", c.evolve.r_max}};
  j["sweep"] = {{"sectors", c.sweep.sectors}, {"z1_abs", c.sweep.z1_abs}, {"z2_abs", c.sweep.z2_abs},
                {"mu", c.sweep.mu}};
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  j["tolerance"] = {{"lattice", c.tol.lattice}};
  j["svg"] = c.svg;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const RunConfig& cfg) {
  // the output directory does not change results
  json j = config_to_json(cfg);
  j.erase("output_dir");
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace msf::harness
