#pragma once

#include <complex>
#include <limits>
#include <iosfwd>
#include <map>
#include <string>

#include "msf/errors.hpp"
#include "msf/quadrature.hpp"
#include "msf/special_functions.hpp"
#include "msf/spectrum.hpp"
#include "msf/units.hpp"

namespace msf::coherent {

using cd = std::complex<double>;

/// Coherent state Phi^{(j)}_{z1,z2} = sum_{m,l} z1^{n1} z2^{n2} / sqrt(Gamma(1+n1) Gamma(1+n2)) Phi_{n1,n2}^{(j)}.
/// Non-integer powers use the principal branch, z^{n} = |z|^n e^{i n arg z}, arg in (-pi, pi].
struct CoherentParams {
  int j = 1;
  cd z1 = 0.0;
  cd z2 = 0.0;
  double mu = 0.0;
  int l0 = 0;

  void validate() const;
  /// Order alpha of Q_alpha in the norm: mu for j=1, 1-mu for j=0.
  double q_order() const noexcept;
  /// Arguments (u, v) of Q_alpha(u, v) in the norm: (|z2|, |z1|) for j=1, (|z1|, |z2|) for j=0.
  std::pair<double, double> q_arguments() const noexcept;
};

// ---------------------------------------------------------------------------
// Special functions of the coherent states

enum class YMode { series, closed };

/// Y_alpha(z1, z2; rho) = sum_m z1^m z2^{m+alpha} I_{m+alpha,m}(rho) / sqrt(Gamma(1+m) Gamma(1+m+alpha))
///                      = e^{z1 z2 - rho/2} (z2/z1)^{alpha/2} J_alpha(2 sqrt(z1 z2 rho)).
/// Both modes take z2^{m+alpha} = z2^m z2^alpha with the principal z2^alpha; the closed form is
/// evaluated as e^{z1 z2 - rho/2} z2^alpha rho^{alpha/2} Jhat_alpha(2 sqrt(z1 z2 rho)) with the
/// even entire Jhat_alpha(w) = J_alpha(w) / (w/2)^alpha, so it has no further branch cut.
/// Closed mode throws BranchError for z1 = 0 with alpha != 0.
cd y_fn(double alpha, cd z1, cd z2, double rho, YMode mode);

/// ln of (v/u)^alpha I_alpha(2uv).
double log_q_boundary(double alpha, double u, double v);

/// Q^-_alpha(u, v) = sum_{l>=1} (v/u)^{alpha+l} I_{alpha+l}(2uv), summed in log space.
special::EvalResult<double> log_q_minus_eval(double alpha, double u, double v, double tol = 1e-15);
double log_q_minus(double alpha, double u, double v);
/// Throws OverflowError when the value is not representable.
double q_minus(double alpha, double u, double v);

/// T(u, v) = 2 e^{-u^2} int_v^inf e^{-t^2} (t/u)^alpha I_alpha(2ut) t dt, integrand built from e^{-x} I_alpha(x).
quad::QuadResult<double> t_fn_eval(double alpha, double u, double v);
double t_fn(double alpha, double u, double v);
/// 1 - T(u, v), integrated directly over [0, v] when that is the smaller part.
quad::QuadResult<double> one_minus_t_eval(double alpha, double u, double v);
double one_minus_t(double alpha, double u, double v);

/// Q_alpha = Q^-_alpha + (v/u)^alpha I_alpha(2uv).
double log_q_fn(double alpha, double u, double v);
double q_fn(double alpha, double u, double v);
/// e^{-u^2-v^2} Q_alpha = 1 - T + e^{-u^2-v^2} (v/u)^alpha I_alpha(2uv).
double q_tilde(double alpha, double u, double v);

/// Delta_alpha = Q^-_alpha / Q_alpha, in (0, 1).
double delta_fn(double alpha, double u, double v);

// ---------------------------------------------------------------------------
// Overlaps and means

/// Complex number stored as log-modulus and phase.
struct LogComplex {
  double log_abs = -std::numeric_limits<double>::infinity();
  double phase = 0.0;
  cd value() const;
};

/// (Phi^{(j)}_{z}, Phi^{(j')}_{z'}) = delta_{jj'} Q_alpha(sqrt(w_u), sqrt(w_v)) with w = z* z' per mode.
LogComplex log_overlap(const CoherentParams& p, const CoherentParams& p2);
cd overlap(const CoherentParams& p, const CoherentParams& p2);

/// <N_s> = |z_s|^2 + (|z_s|/2) d/d|z_s| ln q_tilde, centered differences with Richardson
/// extrapolation. Degenerate z uses the coefficient lattice.
double mean_n(const CoherentParams& p, int s);

/// <a_s>: j=1 -> (z1, z2 Delta_mu(|z2|,|z1|)); j=0 -> (z1 Delta_{1-mu}(|z1|,|z2|), z2).
cd mean_a(const CoherentParams& p, int s);

struct MeanReport {
  double n1_mean = 0.0;
  double n2_mean = 0.0;
  cd a1_mean;
  cd a2_mean;
  cd position_mean;  // x + iy
  double R_mean = 0.0;
  double Rc_mean = 0.0;
  double var_R2 = 0.0;
  double var_Rc2 = 0.0;
  double var_position = 0.0;
};

MeanReport mean_geometry(const CoherentParams& p, const Units& units, double lattice_tol = 1e-12);

// ---------------------------------------------------------------------------
// Coefficient lattice

struct Cell {
  int m = 0;
  int l = 0;
  auto operator<=>(const Cell&) const = default;
};

using CellMap = std::map<Cell, cd>;

struct CoefficientLattice {
  CoherentParams params;
  CellMap coeffs;
  int m_max = 0;
  int l_min = 0;
  int l_max = 0;
  /// Bound on the squared norm of the omitted cells, relative to the retained squared norm.
  double tail_mass = 0.0;

  double norm_sq() const;
  cd coefficient(int m, int l) const;
};

/// z1^{n1} z2^{n2} / sqrt(Gamma(1+n1) Gamma(1+n2)) for the formal labels of (j, m, l).
/// Returns 0 where 1/Gamma vanishes.
cd formal_coefficient(int j, int m, int l, double mu, cd z1, cd z2);

inline constexpr std::size_t kDefaultCellCap = 4'000'000;

/// Enumerates cells until the omitted squared norm is bounded by tol times the retained one.
/// Throws BudgetError above max_cells and DomainError for a null state.
CoefficientLattice build_lattice(const CoherentParams& p, double tol = 1e-12,
                                 std::size_t max_cells = kDefaultCellCap);

/// Ladder operator applied cell by cell; targets outside the sector range are kept as formal cells.
CellMap apply_ladder(const CoefficientLattice& lat, spectrum::LadderOp op);

enum class Observable { N1, N2, R2, Rc2, X_plus_iY };

const char* observable_name(Observable o) noexcept;

struct Moments {
  cd mean;
  double variance = 0.0;
};

/// Mean and variance on the lattice. R2 and Rc2 are hbar/(M omega) (2N+1); X_plus_iY is
/// sqrt(2 hbar / M omega)(a2 - a1_dag) with variance <|x+iy|^2> - |<x+iy>|^2.
Moments observable_moments(const CoefficientLattice& lat, Observable obs, const Units& units = {});

/// sum over cells of conj(a) b, divided by the lattice squared norm.
cd lattice_mean(const CoefficientLattice& lat, const CellMap& a, const CellMap& b);

void write_lattice(std::ostream& os, const CoefficientLattice& lat);
CoefficientLattice read_lattice(std::istream& is);

// ---------------------------------------------------------------------------
// Time dependence

/// z1 -> z1 e^{-i omega t}; the orbit phase is psi = omega t + psi0 with psi0 = pi - arg z1.
CoherentParams evolve(const CoherentParams& p, double t, const Units& units);

/// Range of l kept in the l-decomposition.
struct ColumnRange {
  int l_lo = 0;
  int l_hi = 0;
};

ColumnRange column_range(const CoherentParams& p, double tol = 1e-26);

/// Instantaneous state Phi^{(j)}_{z1,z2}(phi, rho) as a sum over l of phased Y_alpha terms.
cd coherent_phi(const CoherentParams& p, double phi, double rho, const ColumnRange& range,
                YMode mode = YMode::closed);

/// Single column Phi^{(j)l}, including formal columns outside the sector range.
cd coherent_column(const CoherentParams& p, int l, double phi, double rho, YMode mode = YMode::closed);

/// Psi = exp{-(i/hbar)[(pz^2/2M + hbar omega/2) t - pz z]} Phi^{(j)}_{z1(t),z2}(phi, rho),
/// rho = M omega r^2 / (2 hbar).
cd wavefunction(const CoherentParams& p, const Units& units, double pz, double t, double r, double phi, double z,
                const ColumnRange& range);
cd wavefunction(const CoherentParams& p, const Units& units, double pz, double t, double r, double phi, double z);

// ---------------------------------------------------------------------------
// Two-sector combinations

/// <a1> in c0 Phi^{(0)} + c1 Phi^{(1)} built from the two lattices with the same z1, z2, mu.
/// a1 maps the j=1 column l=0 onto the formal j=1 column l=-1; its overlap with the j=0 column
/// l=-1 is computed by radial quadrature.
cd mixed_mean_a1(const CoefficientLattice& lat0, const CoefficientLattice& lat1, cd c0, cd c1);

/// Two-mode coherent state of the uniform field: coefficients z1^{n1} z2^{n2} / sqrt(n1! n2!)
/// over all integer l, mu = 0.
CellMap malkin_manko_lattice(cd z1, cd z2, int m_max, int l_min, int l_max);

}  // namespace msf::coherent
