#include <algorithm>
#include <cmath>
#include <limits>

#include "msf/coherent.hpp"
#include "msf/special_functions.hpp"

namespace msf::coherent {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_pow(double n, double log_abs) { return n == 0.0 ? 0.0 : n * log_abs; }

void check_pair(const CoherentParams& a, const CoherentParams& b) {
  a.validate();
  b.validate();
  if (a.mu != b.mu || a.l0 != b.l0) {
    throw DomainError("overlap: states belong to different flux configurations");
  }
}

// sum_{l,k>=0} w_v^{alpha+l} (w_u w_v)^k / (k! Gamma(alpha+l+k+1)) scaled by e^{-log_scale};
// the phase of w_v^{alpha+l} is (alpha+l) theta_v with theta_v not reduced to (-pi, pi].
cd overlap_double_sum(double alpha, double au, double theta_u, double av, double theta_v, double log_scale) {
  const double lu = std::log(au);
  const double lv = std::log(av);
  cd sum = 0.0;
  double prev_col = std::numeric_limits<double>::infinity();
  for (int l = 0; l < 100000; ++l) {
    double col = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 100000; ++k) {
      const double nu = alpha + l + k;
      const double lt = log_pow(nu, lv) + log_pow(k, lu) - special::log_gamma(k + 1.0) -
                        special::log_gamma(nu + 1.0) - log_scale;
      const double mag = lt == kNegInf ? 0.0 : std::exp(lt);
      sum += std::polar(mag, (alpha + l) * theta_v + k * (theta_u + theta_v));
      col += mag;
      if (mag < prev && mag < 1e-18) break;
      prev = mag;
    }
    if (col < prev_col && col < 1e-18) break;
    prev_col = col;
  }
  return sum;
}

}  // namespace

void CoherentParams::validate() const {
  if (j != 0 && j != 1) throw DomainError("coherent state: sector j must be 0 or 1");
  if (!(mu >= 0.0 && mu < 1.0)) throw DomainError("coherent state: mu must lie in [0, 1)");
  if (!std::isfinite(z1.real()) || !std::isfinite(z1.imag()) || !std::isfinite(z2.real()) ||
      !std::isfinite(z2.imag())) {
    throw DomainError("coherent state: z1 and z2 must be finite");
  }
}

double CoherentParams::q_order() const noexcept { return j == 1 ? mu : 1.0 - mu; }

std::pair<double, double> CoherentParams::q_arguments() const noexcept {
  return j == 1 ? std::pair{std::abs(z2), std::abs(z1)} : std::pair{std::abs(z1), std::abs(z2)};
}

cd LogComplex::value() const {
  if (log_abs == kNegInf) return 0.0;
  if (log_abs > 709.0) throw OverflowError("overlap: value exceeds double range");
  return std::polar(std::exp(log_abs), phase);
}

LogComplex log_overlap(const CoherentParams& p, const CoherentParams& p2) {
  check_pair(p, p2);
  if (p.j != p2.j) return {};
  const double alpha = p.q_order();
  // u pairs with the mode whose exponent is m, v with the one carrying alpha + l + m
  const cd zu = p.j == 1 ? p.z2 : p.z1;
  const cd zu2 = p.j == 1 ? p2.z2 : p2.z1;
  const cd zv = p.j == 1 ? p.z1 : p.z2;
  const cd zv2 = p.j == 1 ? p2.z1 : p2.z2;
  const double au = std::abs(zu) * std::abs(zu2);
  const double av = std::abs(zv) * std::abs(zv2);
  const double theta_u = std::arg(zu2) - std::arg(zu);
  const double theta_v = std::arg(zv2) - std::arg(zv);
  if (au > 0.0 && av > 0.0 && std::remainder(theta_u, 2.0 * M_PI) == 0.0 && theta_v == 0.0) {
    return {log_q_fn(alpha, std::sqrt(au), std::sqrt(av)), 0.0};
  }
  const double scale = (au > 0.0 && av > 0.0) ? log_q_fn(alpha, std::sqrt(au), std::sqrt(av)) : 0.0;
  const cd s = overlap_double_sum(alpha, au, theta_u, av, theta_v, scale);
  if (s == 0.0) return {};
  return {scale + std::log(std::abs(s)), std::arg(s)};
}

cd overlap(const CoherentParams& p, const CoherentParams& p2) { return log_overlap(p, p2).value(); }

double mean_n(const CoherentParams& p, int s) {
  p.validate();
  if (s != 1 && s != 2) throw DomainError("mean_n: mode index must be 1 or 2");
  const auto [u, v] = p.q_arguments();
  const double alpha = p.q_order();
  if (u == 0.0 || v == 0.0) {
    const auto lat = build_lattice(p, 1e-14);
    return observable_moments(lat, s == 1 ? Observable::N1 : Observable::N2).mean.real();
  }
  // mode 1 is v for j=1 and u for j=0
  const bool along_v = (p.j == 1) == (s == 1);
  const double x = along_v ? v : u;
  auto g = [&](double t) { return std::log(along_v ? q_tilde(alpha, u, t) : q_tilde(alpha, t, v)); };
  auto d = [&](double h) { return (g(x + h) - g(x - h)) / (2.0 * h); };
  const double h = 1e-5 * x;
  const double deriv = (4.0 * d(0.5 * h) - d(h)) / 3.0;
  if (!std::isfinite(deriv)) {
    throw ConvergenceError("mean_n: numerical differentiation failed", std::numeric_limits<double>::infinity());
  }
  return x * x + 0.5 * x * deriv;
}

cd mean_a(const CoherentParams& p, int s) {
  p.validate();
  if (s != 1 && s != 2) throw DomainError("mean_a: mode index must be 1 or 2");
  if (p.j == 1 && p.z1 == 0.0 && p.mu > 0.0) throw DomainError("mean_a: null state");
  if (p.j == 0 && p.z2 == 0.0) throw DomainError("mean_a: null state");
  const auto [u, v] = p.q_arguments();
  const double alpha = p.q_order();
  if (p.j == 1) {
    if (s == 1) return p.z1;
    return (u == 0.0 || v == 0.0) ? cd(0.0) : p.z2 * delta_fn(alpha, u, v);
  }
  if (s == 2) return p.z2;
  return (u == 0.0 || v == 0.0) ? cd(0.0) : p.z1 * delta_fn(alpha, u, v);
}

MeanReport mean_geometry(const CoherentParams& p, const Units& units, double lattice_tol) {
  units.validate();
  MeanReport r;
  r.n1_mean = mean_n(p, 1);
  r.n2_mean = mean_n(p, 2);
  r.a1_mean = mean_a(p, 1);
  r.a2_mean = mean_a(p, 2);
  const double len = std::sqrt(units.magnetic_length_sq());
  r.position_mean = len * (r.a2_mean - std::conj(r.a1_mean));
  r.R_mean = len * std::abs(r.a1_mean);
  r.Rc_mean = len * std::abs(r.a2_mean);
  const auto lat = build_lattice(p, lattice_tol);
  r.var_R2 = observable_moments(lat, Observable::R2, units).variance;
  r.var_Rc2 = observable_moments(lat, Observable::Rc2, units).variance;
  r.var_position = observable_moments(lat, Observable::X_plus_iY, units).variance;
  return r;
}

CoherentParams evolve(const CoherentParams& p, double t, const Units& units) {
  CoherentParams out = p;
  out.z1 = p.z1 * std::polar(1.0, -units.omega * t);
  return out;
}

ColumnRange column_range(const CoherentParams& p, double tol) {
  const auto lat = build_lattice(p, tol);
  return {lat.l_min, lat.l_max};
}

cd coherent_column(const CoherentParams& p, int l, double phi, double rho, YMode mode) {
  const cd phase = std::polar(1.0, (l - p.l0) * phi);
  if (p.j == 0) {
    return phase * y_fn(-l - p.mu, p.z1, p.z2, rho, mode);
  }
  const double sign = (l % 2 == 0) ? 1.0 : -1.0;
  return sign * phase * y_fn(l + p.mu, p.z2, p.z1, rho, mode);
}

cd coherent_phi(const CoherentParams& p, double phi, double rho, const ColumnRange& range, YMode mode) {
  cd s = 0.0;
  for (int l = range.l_lo; l <= range.l_hi; ++l) s += coherent_column(p, l, phi, rho, mode);
  return s;
}

cd wavefunction(const CoherentParams& p, const Units& units, double pz, double t, double r, double phi, double z,
                const ColumnRange& range) {
  units.validate();
  const double energy = pz * pz / (2.0 * units.mass) + 0.5 * units.hbar * units.omega;
  const cd prefactor = std::exp(cd(0.0, -(energy * t - pz * z) / units.hbar));
  const double rho = units.mass * units.omega * r * r / (2.0 * units.hbar);
  return prefactor * coherent_phi(evolve(p, t, units), phi, rho, range);
}

cd wavefunction(const CoherentParams& p, const Units& units, double pz, double t, double r, double phi, double z) {
  return wavefunction(p, units, pz, t, r, phi, z, column_range(p));
}

cd mixed_mean_a1(const CoefficientLattice& lat0, const CoefficientLattice& lat1, cd c0, cd c1) {
  if (lat0.params.j != 0 || lat1.params.j != 1) {
    throw DomainError("mixed_mean_a1: expects a j=0 and a j=1 lattice");
  }
  if (lat0.params.mu != lat1.params.mu || lat0.params.l0 != lat1.params.l0) {
    throw DomainError("mixed_mean_a1: lattices belong to different flux configurations");
  }
  const double mu = lat0.params.mu;
  const CellMap a1_0 = apply_ladder(lat0, spectrum::LadderOp::a1);
  const CellMap a1_1 = apply_ladder(lat1, spectrum::LadderOp::a1);
  const double n0 = lat0.norm_sq();
  const double n1 = lat1.norm_sq();
  const cd diag0 = lattice_mean(lat0, lat0.coeffs, a1_0) * n0;
  const cd diag1 = lattice_mean(lat1, lat1.coeffs, a1_1) * n1;

  // a1 lowers the j=1 column l=0 onto the formal column l=-1, which shares its angular
  // dependence with the j=0 column l=-1; a1 on j=0 never reaches l >= 0.
  std::vector<std::pair<spectrum::QuantumNumbers, cd>> f0, f1;
  int m_top = 0;
  for (const auto& [cell, c] : lat0.coeffs) {
    if (cell.l == -1) {
      f0.emplace_back(spectrum::formal_qn(0, cell.m, -1, mu), c);
      m_top = std::max(m_top, cell.m);
    }
  }
  for (const auto& [cell, c] : a1_1) {
    if (cell.l == -1) {
      f1.emplace_back(spectrum::formal_qn(1, cell.m, -1, mu), c);
      m_top = std::max(m_top, cell.m);
    }
  }
  auto radial = [](const auto& terms, double rho) {
    cd s = 0.0;
    for (const auto& [q, c] : terms) s += c * spectrum::formal_eigenfunction(q, 0, 0.0, rho);
    return s;
  };
  cd cross = 0.0;
  if (!f0.empty() && !f1.empty()) {
    quad::QuadOptions opt;
    opt.abs_tol = 1e-15 * std::sqrt(n0 * n1);
    opt.rel_tol = 1e-12;
    opt.max_panels = 20000;
    const double cut = quad::envelope_cutoff(2.0 * m_top + 2.0, 1e-20);
    const auto r = quad::integrate<cd>(
        [&](double rho) { return std::conj(radial(f0, rho)) * radial(f1, rho); }, 0.0, cut, opt);
    if (!r.converged) throw ConvergenceError("mixed_mean_a1: radial overlap did not converge", r.abs_error);
    cross = r.value;
  }
  const cd num = std::norm(c0) * diag0 + std::norm(c1) * diag1 + std::conj(c0) * c1 * cross;
  return num / (std::norm(c0) * n0 + std::norm(c1) * n1);
}

}  // namespace msf::coherent
