#pragma once

#include <complex>

#include "msf/units.hpp"

namespace msf::classical {

/// Cyclotron orbit: circle of radius R around the center (x0, y0) = Rc (cos alpha_c, sin alpha_c),
/// phase psi = omega t + psi0, plus free motion along z.
struct ClassicalOrbit {
  double R = 0.0;
  double Rc = 0.0;
  double psi0 = 0.0;
  double alpha_c = 0.0;
  double pz = 0.0;
  double z0 = 0.0;

  double x0() const noexcept;
  double y0() const noexcept;
  double r_min() const noexcept;
  double r_max() const noexcept;
  /// True when the orbit passes through the flux line (R == Rc within tol).
  bool touches_solenoid(double tol = 1e-12) const noexcept;
};

/// Position and kinetic momentum P = M v.
struct PhaseState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double Px = 0.0;
  double Py = 0.0;
};

struct CanonicalMomentum {
  double px = 0.0;
  double py = 0.0;
};

struct Observables {
  double energy = 0.0;
  double lz = 0.0;
};

struct ComplexInvariants {
  std::complex<double> a1;
  std::complex<double> a2;
};

enum class Sector { j0, j1, boundary };

const char* sector_name(Sector s) noexcept;

PhaseState orbit_state(const ClassicalOrbit& orbit, const Units& units, double t);

/// p = P + (q/c) A with q = -e; the flux line contributes hbar (l0+mu) / r^2 to the azimuthal part.
CanonicalMomentum canonical_momentum(const PhaseState& s, const Units& units, const FluxConfig& flux);

/// E = M omega^2 R^2 / 2 and L_z = (M omega / 2)(R^2 - Rc^2) - hbar (l0 + mu).
Observables classical_observables(const ClassicalOrbit& orbit, const Units& units, const FluxConfig& flux);

/// a1 = -sqrt(M omega / 2 hbar) R e^{-i psi}, a2 = sqrt(M omega / 2 hbar) Rc e^{i alpha_c}.
ComplexInvariants classical_a(const ClassicalOrbit& orbit, const Units& units, double t);

/// The same invariants from position and kinetic momentum.
ComplexInvariants classical_a(const PhaseState& s, const Units& units);

/// Orbit whose invariants at time t are (a1, a2).
ClassicalOrbit orbit_from_a(std::complex<double> a1, std::complex<double> a2, const Units& units, double t = 0.0,
                            double pz = 0.0, double z0 = 0.0);

/// j1 if R^2 - Rc^2 > eps, j0 if < -eps, boundary otherwise.
Sector classify_orbit(const ClassicalOrbit& orbit, double eps = 1e-12);

}  // namespace msf::classical
