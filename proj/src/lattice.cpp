#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "msf/coherent.hpp"
#include "msf/special_functions.hpp"

namespace msf::coherent {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// n ln|z| with 0^0 = 1
double log_pow(double n, double log_abs) { return n == 0.0 ? 0.0 : n * log_abs; }

// ln|c|^2 for the cell with occupation labels (n1, n2); n1, n2 > -1
double log_weight(double n1, double n2, double la1, double la2) {
  return 2.0 * (log_pow(n1, la1) + log_pow(n2, la2)) - special::log_gamma(1.0 + n1) -
         special::log_gamma(1.0 + n2);
}

cd cell_value(double n1, double n2, cd z1, cd z2) {
  const double la1 = std::log(std::abs(z1));
  const double la2 = std::log(std::abs(z2));
  const double lw = 0.5 * log_weight(n1, n2, la1, la2);
  if (lw == kNegInf) return 0.0;
  if (lw > 700.0) {
    throw OverflowError("coefficient lattice: coefficient magnitude exceeds double range");
  }
  return std::polar(std::exp(lw), n1 * std::arg(z1) + n2 * std::arg(z2));
}

}  // namespace

double CoefficientLattice::norm_sq() const {
  double s = 0.0;
  for (const auto& [cell, c] : coeffs) s += std::norm(c);
  return s;
}

cd CoefficientLattice::coefficient(int m, int l) const {
  const auto it = coeffs.find({m, l});
  return it == coeffs.end() ? cd(0.0) : it->second;
}

cd formal_coefficient(int j, int m, int l, double mu, cd z1, cd z2) {
  const auto q = spectrum::formal_qn(j, m, l, mu);
  for (double n : {q.n1, q.n2}) {
    if (n <= -1.0 && n == std::floor(n)) return 0.0;
    if (n <= -1.0) throw DomainError("formal_coefficient: occupation label below -1");
  }
  if ((q.n1 < 0.0 && z1 == 0.0) || (q.n2 < 0.0 && z2 == 0.0)) {
    throw DomainError("formal_coefficient: negative power of zero");
  }
  return cell_value(q.n1, q.n2, z1, z2);
}

CoefficientLattice build_lattice(const CoherentParams& p, double tol, std::size_t max_cells) {
  p.validate();
  if (!(tol > 0.0)) throw DomainError("build_lattice: tolerance must be > 0");
  if (p.j == 1 && p.z1 == 0.0 && p.mu > 0.0) {
    throw DomainError("build_lattice: state vanishes identically (j=1, z1=0, mu>0)");
  }
  if (p.j == 0 && p.z2 == 0.0) {
    throw DomainError("build_lattice: state vanishes identically (j=0, z2=0)");
  }
  const double a1 = std::abs(p.z1);
  const double a2 = std::abs(p.z2);
  const double la1 = std::log(a1);
  const double la2 = std::log(a2);
  const double prod_sq = a1 * a1 * a2 * a2;
  const int dir = p.j == 1 ? 1 : -1;
  const int l_start = p.j == 1 ? 0 : -1;

  auto labels = [&](int m, int l) {
    const auto q = spectrum::formal_qn(p.j, m, l, p.mu);
    return std::pair{q.n1, q.n2};
  };

  // lower bound on the squared norm from the largest cell
  int m_peak = 0;
  int l_peak = 0;
  if (p.j == 1) {
    m_peak = a1 == 0.0 ? 0 : static_cast<int>(std::lround(a2 * a2));
    l_peak = std::max(0, static_cast<int>(std::lround(a1 * a1 - p.mu - m_peak)));
  } else {
    m_peak = static_cast<int>(std::lround(a1 * a1));
    l_peak = std::min(-1, static_cast<int>(std::lround(m_peak - p.mu - a2 * a2)));
  }
  const auto [pn1, pn2] = labels(m_peak, l_peak);
  const double log_lower = log_weight(pn1, pn2, la1, la2);
  if (log_lower > 1400.0) {
    throw OverflowError("build_lattice: coefficients exceed double range");
  }
  const double lower = std::exp(log_lower);

  CoefficientLattice lat;
  lat.params = p;
  lat.l_min = lat.l_max = l_start;
  double omitted = 0.0;
  std::size_t cells = 0;
  for (int k = 0;; ++k) {
    const int l = l_start + dir * k;
    const double col_tol = tol * lower / (4.0 * (k + 1.0) * (k + 1.0));
    double col_mass = 0.0;
    double col_tail = 0.0;
    for (int m = 0;; ++m) {
      const auto [n1, n2] = labels(m, l);
      const double lw = log_weight(n1, n2, la1, la2);
      if (lw > 1400.0) throw OverflowError("build_lattice: coefficient magnitude exceeds double range");
      const double w = std::exp(lw);
      if (w > 0.0) {
        if (++cells > max_cells) {
          throw BudgetError("build_lattice: cell count exceeds the configured cap");
        }
        lat.coeffs[{m, l}] = cell_value(n1, n2, p.z1, p.z2);
        lat.m_max = std::max(lat.m_max, m);
        col_mass += w;
      }
      // successive cells in a column shrink by this decreasing ratio
      const double r = prod_sq / ((n1 + 1.0) * (n2 + 1.0));
      if (r < 1.0) {
        const double tail = w * r / (1.0 - r);
        if (tail <= col_tol) {
          col_tail = tail;
          break;
        }
      }
    }
    omitted += col_tail;
    lat.l_min = std::min(lat.l_min, l);
    lat.l_max = std::max(lat.l_max, l);
    // column masses beyond this one shrink at least by |z|^2 / (alpha + 1)
    const double alpha = p.j == 1 ? l + p.mu : -l - p.mu;
    const double ratio = (p.j == 1 ? a1 * a1 : a2 * a2) / (alpha + 1.0);
    if (ratio < 1.0) {
      const double rest = (col_mass + col_tail) * ratio / (1.0 - ratio);
      if (rest <= 0.5 * tol * lower) {
        omitted += rest;
        break;
      }
    }
  }
  lat.tail_mass = omitted / lat.norm_sq();
  return lat;
}

CellMap apply_ladder(const CoefficientLattice& lat, spectrum::LadderOp op) {
  CellMap out;
  for (const auto& [cell, c] : lat.coeffs) {
    const auto q = spectrum::formal_qn(lat.params.j, cell.m, cell.l, lat.params.mu);
    const auto r = spectrum::ladder_apply(op, q);
    if (r.kind == spectrum::TargetKind::zero) continue;
    out[{r.target.m, r.target.l}] += r.coefficient * c;
  }
  return out;
}

const char* observable_name(Observable o) noexcept {
  switch (o) {
    case Observable::N1:
      return "N1";
    case Observable::N2:
      return "N2";
    case Observable::R2:
      return "R2";
    case Observable::Rc2:
      return "Rc2";
    case Observable::X_plus_iY:
      return "x+iy";
  }
  return "?";
}

cd lattice_mean(const CoefficientLattice& lat, const CellMap& a, const CellMap& b) {
  cd s = 0.0;
  for (const auto& [cell, va] : a) {
    const auto it = b.find(cell);
    if (it != b.end()) s += std::conj(va) * it->second;
  }
  return s / lat.norm_sq();
}

Moments observable_moments(const CoefficientLattice& lat, Observable obs, const Units& units) {
  units.validate();
  if (lat.tail_mass > 1e-8) {
    throw DomainError("observable_moments: lattice truncated too coarsely (tail_mass > 1e-8)");
  }
  const double norm = lat.norm_sq();
  const double scale = units.hbar / (units.mass * units.omega);
  Moments out;
  if (obs == Observable::X_plus_iY) {
    const double s = std::sqrt(2.0 * scale);
    const CellMap up = apply_ladder(lat, spectrum::LadderOp::a2);
    const CellMap down = apply_ladder(lat, spectrum::LadderOp::a1_dag);
    CellMap x = up;
    for (const auto& [cell, c] : down) x[cell] -= c;
    double sq = 0.0;
    for (auto& [cell, c] : x) {
      c *= s;
      sq += std::norm(c);
    }
    // cells outside the lattice carry other angular momenta or are formal, both orthogonal
    out.mean = lattice_mean(lat, lat.coeffs, x);
    out.variance = std::max(0.0, sq / norm - std::norm(out.mean));
    return out;
  }
  const bool first = obs == Observable::N1 || obs == Observable::R2;
  double m1 = 0.0;
  double m2 = 0.0;
  for (const auto& [cell, c] : lat.coeffs) {
    const auto q = spectrum::formal_qn(lat.params.j, cell.m, cell.l, lat.params.mu);
    const double n = first ? q.n1 : q.n2;
    const double w = std::norm(c);
    m1 += w * n;
    m2 += w * n * n;
  }
  m1 /= norm;
  m2 /= norm;
  const double var_n = std::max(0.0, m2 - m1 * m1);
  if (obs == Observable::N1 || obs == Observable::N2) {
    out.mean = m1;
    out.variance = var_n;
  } else {
    out.mean = scale * (2.0 * m1 + 1.0);
    out.variance = 4.0 * scale * scale * var_n;
  }
  return out;
}

// Format:
//   # msf-lattice v1
//   j,mu,l0,z1_re,z1_im,z2_re,z2_im,m_max,l_min,l_max,tail_mass
//   <one row of values>
//   m,l,re,im
//   <one row per stored cell>
void write_lattice(std::ostream& os, const CoefficientLattice& lat) {
  const auto& p = lat.params;
  os << std::setprecision(17);
  os << "# msf-lattice v1\n";
  os << "j,mu,l0,z1_re,z1_im,z2_re,z2_im,m_max,l_min,l_max,tail_mass\n";
  os << p.j << ',' << p.mu << ',' << p.l0 << ',' << p.z1.real() << ',' << p.z1.imag() << ',' << p.z2.real()
     << ',' << p.z2.imag() << ',' << lat.m_max << ',' << lat.l_min << ',' << lat.l_max << ',' << lat.tail_mass
     << '\n';
  os << "m,l,re,im\n";
  for (const auto& [cell, c] : lat.coeffs) {
    os << cell.m << ',' << cell.l << ',' << c.real() << ',' << c.imag() << '\n';
  }
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw DomainError("read_lattice: malformed number '" + s + "'");
  }
  if (pos != s.size()) throw DomainError("read_lattice: malformed number '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  const double v = to_double(s);
  if (v != std::floor(v)) throw DomainError("read_lattice: expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

}  // namespace

CoefficientLattice read_lattice(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "# msf-lattice v1") {
    throw DomainError("read_lattice: not a lattice file");
  }
  std::string header, values, cell_header;
  if (!std::getline(is, header) || !std::getline(is, values) || !std::getline(is, cell_header) ||
      cell_header != "m,l,re,im") {
    throw DomainError("read_lattice: malformed header");
  }
  const auto v = split_row(values);
  if (v.size() != 11) throw DomainError("read_lattice: malformed header");
  CoefficientLattice lat;
  auto& p = lat.params;
  p.j = to_int(v[0]);
  p.mu = to_double(v[1]);
  p.l0 = to_int(v[2]);
  p.z1 = {to_double(v[3]), to_double(v[4])};
  p.z2 = {to_double(v[5]), to_double(v[6])};
  lat.m_max = to_int(v[7]);
  lat.l_min = to_int(v[8]);
  lat.l_max = to_int(v[9]);
  lat.tail_mass = to_double(v[10]);
  p.validate();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_row(line);
    if (f.size() != 4) throw DomainError("read_lattice: malformed cell row");
    const Cell c{to_int(f[0]), to_int(f[1])};
    if (!spectrum::in_sector(p.j, c.m, c.l)) throw DomainError("read_lattice: cell outside the sector");
    lat.coeffs[c] = {to_double(f[2]), to_double(f[3])};
  }
  return lat;
}

CellMap malkin_manko_lattice(cd z1, cd z2, int m_max, int l_min, int l_max) {
  CellMap out;
  for (int l = l_min; l <= l_max; ++l) {
    for (int m = 0; m <= m_max; ++m) {
      const int n1 = m + std::max(l, 0);
      const int n2 = m + std::max(-l, 0);
      const cd c = cell_value(n1, n2, z1, z2);
      if (c != 0.0) out[{m, l}] = c;
    }
  }
  return out;
}

}  // namespace msf::coherent
