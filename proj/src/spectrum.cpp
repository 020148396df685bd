#include "msf/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "msf/quadrature.hpp"
#include "msf/special_functions.hpp"

namespace msf::spectrum {

namespace {

using cd = std::complex<double>;

void check_mu(double mu) {
  if (!(mu >= 0.0 && mu < 1.0)) {
    throw DomainError("quantum numbers: mu must lie in [0, 1)");
  }
}

double sign_of_l(int l) { return (l % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

double QuantumNumbers::radial_alpha() const noexcept { return j == 0 ? -l - mu : l + mu; }

bool QuantumNumbers::regular() const noexcept { return in_sector(j, m, l); }

bool in_sector(int j, int m, int l) noexcept {
  if (m < 0) {
    return false;
  }
  return j == 0 ? l <= -1 : l >= 0;
}

QuantumNumbers formal_qn(int j, int m, int l, double mu) {
  QuantumNumbers q;
  q.j = j;
  q.m = m;
  q.l = l;
  q.mu = mu;
  if (j == 0) {
    q.n1 = m;
    q.n2 = m - l - mu;
  } else {
    q.n1 = m + l + mu;
    q.n2 = m;
  }
  return q;
}

QuantumNumbers make_qn(int j, int m, int l, double mu) {
  check_mu(mu);
  if (j != 0 && j != 1) {
    throw SectorError("make_qn: sector j must be 0 or 1");
  }
  if (m < 0) {
    throw SectorError("make_qn: m must be >= 0");
  }
  if (j == 0 && l > -1) {
    throw SectorError("make_qn: sector j=0 requires l <= -1");
  }
  if (j == 1 && l < 0) {
    throw SectorError("make_qn: sector j=1 requires l >= 0");
  }
  return formal_qn(j, m, l, mu);
}

LevelEntry energy_lz(const QuantumNumbers& qn, int l0) {
  return {qn, qn.n1 + 0.5, static_cast<double>(qn.l - l0)};
}

double radial_part(const QuantumNumbers& qn, double rho) {
  const double alpha = qn.radial_alpha();
  double v = 0.0;
  if (alpha > -1.0) {
    v = special::laguerre_fn(alpha, qn.m, rho);
  } else if (alpha == -1.0 && qn.m >= 1) {
    v = -special::laguerre_fn(1.0, qn.m - 1, rho);
  } else {
    throw DomainError("radial_part: radial order must exceed -1");
  }
  return qn.j == 1 ? sign_of_l(qn.l) * v : v;
}

std::complex<double> formal_eigenfunction(const QuantumNumbers& qn, int l0, double phi, double rho) {
  return radial_part(qn, rho) * std::polar(1.0, (qn.l - l0) * phi);
}

std::complex<double> eigenfunction(const QuantumNumbers& qn, int l0, double phi, double rho) {
  if (!qn.regular()) {
    throw SectorError("eigenfunction: quantum numbers outside the sector range");
  }
  return formal_eigenfunction(qn, l0, phi, rho);
}

std::complex<double> inner_product(const PlaneFunction& f, const PlaneFunction& g,
                                   const InnerProductOptions& opt) {
  const auto rule = quad::gauss_legendre(opt.phi_nodes, 0.0, 2.0 * std::numbers::pi);
  auto radial = [&](double rho) {
    cd s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      s += rule.weights[i] * std::conj(f(rule.nodes[i], rho)) * g(rule.nodes[i], rho);
    }
    return s / (2.0 * std::numbers::pi);
  };
  quad::QuadOptions qo;
  qo.abs_tol = opt.abs_tol;
  qo.rel_tol = opt.rel_tol;
  const auto r = quad::integrate<cd>(radial, 0.0, opt.rho_max, qo);
  if (!r.converged) {
    throw ConvergenceError("inner_product: radial quadrature did not converge", r.abs_error);
  }
  return r.value;
}

double radial_cutoff(const QuantumNumbers& qn) {
  return quad::envelope_cutoff(std::max(0.0, qn.radial_alpha() + 2.0 * qn.m));
}

std::complex<double> inner_product(const QuantumNumbers& a, const QuantumNumbers& b, int l0) {
  InnerProductOptions opt;
  opt.rho_max = std::max(radial_cutoff(a), radial_cutoff(b));
  return inner_product([&](double phi, double rho) { return eigenfunction(a, l0, phi, rho); },
                       [&](double phi, double rho) { return eigenfunction(b, l0, phi, rho); }, opt);
}

const char* ladder_name(LadderOp op) noexcept {
  switch (op) {
    case LadderOp::a1:
      return "a1";
    case LadderOp::a1_dag:
      return "a1_dag";
    case LadderOp::a2:
      return "a2";
    case LadderOp::a2_dag:
      return "a2_dag";
  }
  return "?";
}

LadderOp parse_ladder(const std::string& name) {
  for (LadderOp op : {LadderOp::a1, LadderOp::a1_dag, LadderOp::a2, LadderOp::a2_dag}) {
    if (name == ladder_name(op)) {
      return op;
    }
  }
  throw DomainError("unknown ladder operator: " + name);
}

LadderResult ladder_apply(LadderOp op, const QuantumNumbers& qn) {
  // (dm, dl) per sector: n1 and n2 shift by one while the other stays fixed
  int dm = 0;
  int dl = 0;
  double n = 0.0;
  const bool s1 = qn.j == 1;
  switch (op) {
    case LadderOp::a1:
      n = qn.n1;
      dm = s1 ? 0 : -1;
      dl = -1;
      break;
    case LadderOp::a1_dag:
      n = qn.n1 + 1.0;
      dm = s1 ? 0 : 1;
      dl = 1;
      break;
    case LadderOp::a2:
      n = qn.n2;
      dm = s1 ? -1 : 0;
      dl = 1;
      break;
    case LadderOp::a2_dag:
      n = qn.n2 + 1.0;
      dm = s1 ? 1 : 0;
      dl = -1;
      break;
  }
  LadderResult r;
  if (n <= 0.0) {
    r.kind = TargetKind::zero;
    return r;
  }
  r.coefficient = std::sqrt(n);
  r.target = formal_qn(qn.j, qn.m + dm, qn.l + dl, qn.mu);
  r.kind = r.target.regular() ? TargetKind::regular : TargetKind::irregular;
  return r;
}

std::vector<LevelEntry> level_diagram(double mu, int m_max, int l_min, int l_max, int l0) {
  check_mu(mu);
  std::vector<LevelEntry> out;
  for (int l = l_min; l <= l_max; ++l) {
    const int j = l >= 0 ? 1 : 0;
    for (int m = 0; m <= m_max; ++m) {
      out.push_back(energy_lz(make_qn(j, m, l, mu), l0));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const LevelEntry& a, const LevelEntry& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    if (a.qn.j != b.qn.j) return a.qn.j < b.qn.j;
    if (a.qn.l != b.qn.l) return a.qn.l < b.qn.l;
    return a.qn.m < b.qn.m;
  });
  return out;
}

}  // namespace msf::spectrum
