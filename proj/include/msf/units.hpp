#pragma once

namespace msf {

/// Physical scales. omega is the cyclotron frequency eB/(Mc); B, e and c enter
/// only through omega and the flux.
struct Units {
  double hbar = 1.0;
  double mass = 1.0;
  double omega = 1.0;

  /// 2 hbar / (M omega); rho = r^2 / magnetic_length_sq.
  double magnetic_length_sq() const noexcept { return 2.0 * hbar / (mass * omega); }
  /// Throws DomainError unless all scales are finite and positive.
  void validate() const;
};

/// Solenoid flux in flux quanta, split as l0 + mu with l0 = floor(flux).
struct FluxConfig {
  double flux_quanta = 0.0;
  int l0 = 0;
  double mu = 0.0;

  static FluxConfig from_flux(double flux_quanta);
  static FluxConfig from_parts(int l0, double mu);
  /// Throws DomainError if mu is outside [0, 1) or the parts do not add up.
  void validate() const;
};

}  // namespace msf
