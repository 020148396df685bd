#include "msf/classical.hpp"

#include <cmath>
#include <numbers>

namespace msf::classical {

namespace {

using cd = std::complex<double>;

double amplitude_scale(const Units& u) { return std::sqrt(u.mass * u.omega / (2.0 * u.hbar)); }

}  // namespace

double ClassicalOrbit::x0() const noexcept { return Rc * std::cos(alpha_c); }
double ClassicalOrbit::y0() const noexcept { return Rc * std::sin(alpha_c); }
double ClassicalOrbit::r_min() const noexcept { return std::abs(R - Rc); }
double ClassicalOrbit::r_max() const noexcept { return R + Rc; }
bool ClassicalOrbit::touches_solenoid(double tol) const noexcept { return r_min() <= tol; }

const char* sector_name(Sector s) noexcept {
  switch (s) {
    case Sector::j0:
      return "0";
    case Sector::j1:
      return "1";
    case Sector::boundary:
      return "boundary";
  }
  return "?";
}

PhaseState orbit_state(const ClassicalOrbit& orbit, const Units& units, double t) {
  const double psi = units.omega * t + orbit.psi0;
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  const double mwr = units.mass * units.omega * orbit.R;
  PhaseState st;
  st.x = orbit.x0() + orbit.R * c;
  st.y = orbit.y0() + orbit.R * s;
  st.z = orbit.pz / units.mass * t + orbit.z0;
  st.Px = -mwr * s;
  st.Py = mwr * c;
  return st;
}

CanonicalMomentum canonical_momentum(const PhaseState& s, const Units& units, const FluxConfig& flux) {
  const double r2 = s.x * s.x + s.y * s.y;
  const double k = 0.5 * units.mass * units.omega + units.hbar * (flux.l0 + flux.mu) / r2;
  return {s.Px + k * s.y, s.Py - k * s.x};
}

Observables classical_observables(const ClassicalOrbit& orbit, const Units& units, const FluxConfig& flux) {
  const double mw = units.mass * units.omega;
  Observables o;
  o.energy = 0.5 * mw * units.omega * orbit.R * orbit.R;
  o.lz = 0.5 * mw * (orbit.R * orbit.R - orbit.Rc * orbit.Rc) - units.hbar * (flux.l0 + flux.mu);
  return o;
}

ComplexInvariants classical_a(const ClassicalOrbit& orbit, const Units& units, double t) {
  const double k = amplitude_scale(units);
  const double psi = units.omega * t + orbit.psi0;
  return {-k * orbit.R * std::polar(1.0, -psi), k * orbit.Rc * std::polar(1.0, orbit.alpha_c)};
}

ComplexInvariants classical_a(const PhaseState& s, const Units& units) {
  const double mw = units.mass * units.omega;
  const double norm = std::sqrt(2.0 * units.hbar * mw);
  const cd a1 = cd(-s.Py, -s.Px) / norm;
  const cd a2 = cd(mw * s.x - s.Py, mw * s.y + s.Px) / norm;
  return {a1, a2};
}

ClassicalOrbit orbit_from_a(cd a1, cd a2, const Units& units, double t, double pz, double z0) {
  const double k = amplitude_scale(units);
  ClassicalOrbit o;
  o.R = std::abs(a1) / k;
  o.Rc = std::abs(a2) / k;
  // a1 = -|a1| e^{-i psi}  =>  psi = pi - arg a1
  const double psi = a1 == 0.0 ? 0.0 : std::numbers::pi - std::arg(a1);
  o.psi0 = std::remainder(psi - units.omega * t, 2.0 * std::numbers::pi);
  o.alpha_c = a2 == 0.0 ? 0.0 : std::arg(a2);
  o.pz = pz;
  o.z0 = z0;
  return o;
}

Sector classify_orbit(const ClassicalOrbit& orbit, double eps) {
  const double d = orbit.R * orbit.R - orbit.Rc * orbit.Rc;
  if (d > eps) {
    return Sector::j1;
  }
  if (d < -eps) {
    return Sector::j0;
  }
  return Sector::boundary;
}

}  // namespace msf::classical
