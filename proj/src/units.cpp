#include "msf/units.hpp"

#include <cmath>

#include "msf/errors.hpp"

namespace msf {

void Units::validate() const {
  for (double v : {hbar, mass, omega}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("units: hbar, mass and omega must be finite and > 0");
    }
  }
}

FluxConfig FluxConfig::from_flux(double flux_quanta) {
  if (!std::isfinite(flux_quanta)) {
    throw DomainError("flux: must be finite");
  }
  FluxConfig f;
  f.flux_quanta = flux_quanta;
  const double fl = std::floor(flux_quanta);
  f.l0 = static_cast<int>(fl);
  f.mu = flux_quanta - fl;
  if (f.mu >= 1.0) {
    f.mu = 0.0;
    f.l0 += 1;
  }
  return f;
}

FluxConfig FluxConfig::from_parts(int l0, double mu) {
  FluxConfig f;
  f.l0 = l0;
  f.mu = mu;
  f.flux_quanta = l0 + mu;
  f.validate();
  return f;
}

void FluxConfig::validate() const {
  if (!(mu >= 0.0 && mu < 1.0)) {
    throw DomainError("flux: mantissa mu must lie in [0, 1)");
  }
  if (std::abs(flux_quanta - (l0 + mu)) > 1e-12 * std::max(1.0, std::abs(flux_quanta))) {
    throw DomainError("flux: flux_quanta must equal l0 + mu");
  }
}

}  // namespace msf
