#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "msf/errors.hpp"

namespace msf::spectrum {

/// Stationary-state labels. Sector j=0: l <= -1, n1 = m, n2 = m - l - mu.
/// Sector j=1: l >= 0, n1 = m + l + mu, n2 = m.
struct QuantumNumbers {
  int j = 1;
  int m = 0;
  int l = 0;
  double n1 = 0.0;
  double n2 = 0.0;
  double mu = 0.0;

  /// Order alpha of the radial Laguerre function I_{m+alpha,m}.
  double radial_alpha() const noexcept;
  /// True when (j, m, l) lies in the sector range.
  bool regular() const noexcept;
};

/// Throws SectorError when (j, l) is inconsistent or m < 0, DomainError for mu outside [0,1).
QuantumNumbers make_qn(int j, int m, int l, double mu);

/// Same index rules without range checks. Cells outside the sector range are the
/// formal targets of the ladder operators (irregular at the origin).
QuantumNumbers formal_qn(int j, int m, int l, double mu);

bool in_sector(int j, int m, int l) noexcept;

struct LevelEntry {
  QuantumNumbers qn;
  double energy = 0.0;  // units of hbar omega
  double lz = 0.0;      // units of hbar
};

LevelEntry energy_lz(const QuantumNumbers& qn, int l0);

/// Radial part: j=0 -> I_{n2,n1}(rho), j=1 -> (-1)^l I_{n1,n2}(rho).
double radial_part(const QuantumNumbers& qn, double rho);

/// Eigenfunction with unit normalization constant:
/// j=0: e^{i(l-l0)phi} I_{n2,n1}(rho); j=1: e^{i(l-l0)phi - i pi l} I_{n1,n2}(rho).
std::complex<double> eigenfunction(const QuantumNumbers& qn, int l0, double phi, double rho);

/// Evaluates a formal cell from formal_qn, including the irregular ladder targets.
/// Requires radial order alpha > -1, or alpha = -1 with m >= 1 (then I_{m-1,m} = -I_{m,m-1}).
std::complex<double> formal_eigenfunction(const QuantumNumbers& qn, int l0, double phi, double rho);

using PlaneFunction = std::function<std::complex<double>(double phi, double rho)>;

struct InnerProductOptions {
  double rho_max = 120.0;
  int phi_nodes = 64;
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
};

/// (f, g) = (1/2pi) int_0^inf drho int_0^{2pi} dphi f* g.
/// Gauss-Legendre in phi, adaptive Gauss-Kronrod in rho on [0, rho_max].
/// Throws ConvergenceError carrying the achieved error estimate.
std::complex<double> inner_product(const PlaneFunction& f, const PlaneFunction& g,
                                   const InnerProductOptions& opt = {});

/// Inner product of two eigenfunctions with rho_max chosen from their envelopes.
std::complex<double> inner_product(const QuantumNumbers& a, const QuantumNumbers& b, int l0);

/// Radial cutoff beyond which e^{-rho} rho^{alpha+2m} < 1e-16 for the state.
double radial_cutoff(const QuantumNumbers& qn);

enum class LadderOp { a1, a1_dag, a2, a2_dag };
enum class TargetKind { regular, irregular, zero };

struct LadderResult {
  double coefficient = 0.0;
  TargetKind kind = TargetKind::zero;
  /// Formal target labels (meaningful unless kind == zero).
  QuantumNumbers target;
};

const char* ladder_name(LadderOp op) noexcept;
LadderOp parse_ladder(const std::string& name);

/// Action of the ladder operators on the phased basis:
///   a1: sqrt(n1) (n1-1, n2)   a1_dag: sqrt(n1+1) (n1+1, n2)
///   a2: sqrt(n2) (n1, n2-1)   a2_dag: sqrt(n2+1) (n1, n2+1)
/// A vanishing coefficient gives zero; a target outside the sector range is irregular.
/// Also accepts formal (out-of-range) input cells.
LadderResult ladder_apply(LadderOp op, const QuantumNumbers& qn);

/// All states with 0 <= m <= m_max and l_min <= l <= l_max, both sectors, sorted by
/// energy (ties by j, l, m).
std::vector<LevelEntry> level_diagram(double mu, int m_max, int l_min, int l_max, int l0 = 0);

}  // namespace msf::spectrum
