#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mp_oracles.hpp"
#include "msf/coherent.hpp"

using namespace msf;
using namespace msf::coherent;

namespace {

cd eval_cells(int j, double mu, int l0, const CellMap& cells, double phi, double rho) {
  cd s = 0.0;
  for (const auto& [cell, c] : cells) {
    s += c * spectrum::formal_eigenfunction(spectrum::formal_qn(j, cell.m, cell.l, mu), l0, phi, rho);
  }
  return s;
}

// Q_alpha(u, v) = sum_l (v/u)^{alpha+l} I_{alpha+l}(2uv) in extended precision, as log
double oracle_log_q(double alpha, double u, double v, int l_from = 0) {
  oracle::mp s = 0;
  for (int l = l_from; l < l_from + 400; ++l) {
    const oracle::mp t = exp(oracle::mp((alpha + l) * std::log(v / u) + oracle::log_bessel_i(alpha + l, 2 * u * v, 150)));
    s += t;
    if (l > l_from + 5 && t < 1e-30 * s) break;
  }
  return static_cast<double>(log(s));
}

CoherentParams make(int j, cd z1, cd z2, double mu, int l0 = 0) {
  CoherentParams p;
  p.j = j;
  p.z1 = z1;
  p.z2 = z2;
  p.mu = mu;
  p.l0 = l0;
  return p;
}

}  // namespace

TEST_CASE("y_fn: series and closed form agree with an extended-precision Bessel oracle") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> mag(0.1, 2.0), ang(-3.1, 3.1), rr(0.0, 12.0);
  for (double alpha : {0.0, 0.3, -0.4, 1.7, 4.5}) {
    for (int i = 0; i < 12; ++i) {
      const cd z1 = std::polar(mag(rng), ang(rng));
      const cd z2 = std::polar(mag(rng), ang(rng));
      const double rho = rr(rng);
      const cd w = 2.0 * std::sqrt(z1 * z2 * rho);
      const cd ref = std::exp(z1 * z2 - 0.5 * rho) * std::pow(z2, alpha) * std::pow(rho, 0.5 * alpha) *
                     oracle::reduced_bessel_j(alpha, w);
      const cd s = y_fn(alpha, z1, z2, rho, YMode::series);
      const cd c = y_fn(alpha, z1, z2, rho, YMode::closed);
      CHECK(std::abs(s - ref) <= 1e-11 * std::abs(ref) + 1e-15);
      CHECK(std::abs(c - ref) <= 1e-11 * std::abs(ref) + 1e-15);
    }
  }
}

TEST_CASE("y_fn: degenerate arguments") {
  CHECK(std::abs(y_fn(0.0, {0.7, 0.2}, {1.1, -0.3}, 0.0, YMode::series) - std::exp(cd(0.7, 0.2) * cd(1.1, -0.3))) <
        1e-14);
  CHECK(y_fn(0.5, {0.7, 0.2}, {1.1, -0.3}, 0.0, YMode::closed) == 0.0);
  CHECK(y_fn(0.5, {0.7, 0.2}, 0.0, 2.0, YMode::series) == 0.0);
  // z1 = 0 keeps only the m = 0 term
  const double rho = 1.3;
  const cd z2(0.4, 0.9);
  const cd ref = std::pow(z2, 0.6) * oracle::laguerre_fn(0.6, 0, rho) / std::sqrt(std::tgamma(1.6));
  CHECK(std::abs(y_fn(0.6, 0.0, z2, rho, YMode::series) - ref) < 1e-14);
  CHECK_THROWS_AS(y_fn(0.6, 0.0, z2, rho, YMode::closed), BranchError);
  CHECK_THROWS_AS(y_fn(-1.0, 1.0, 1.0, 1.0, YMode::series), DomainError);
}

TEST_CASE("Q functions: series against extended precision and the T representation") {
  for (double alpha : {0.1, 0.5, 1.0, 1.9}) {
    for (double u : {0.5, 1.7, 4.0}) {
      for (double v : {0.5, 2.2, 4.0}) {
        CHECK(log_q_fn(alpha, u, v) == doctest::Approx(oracle_log_q(alpha, u, v)).epsilon(1e-13));
        CHECK(log_q_minus(alpha, u, v) == doctest::Approx(oracle_log_q(alpha, u, v, 1)).epsilon(1e-13));
        const double rel = q_minus(alpha, u, v) / (std::exp(u * u + v * v) * one_minus_t(alpha, u, v)) - 1.0;
        CHECK(std::abs(rel) < 1e-11);
        CHECK(t_fn(alpha, u, v) + one_minus_t(alpha, u, v) == doctest::Approx(1.0).epsilon(1e-13));
        const double qt = q_tilde(alpha, u, v);
        CHECK(std::log(qt) == doctest::Approx(log_q_fn(alpha, u, v) - u * u - v * v).epsilon(1e-11));
        const double d = delta_fn(alpha, u, v);
        CHECK(d > 0.0);
        CHECK(d < 1.0);
      }
    }
  }
  CHECK(t_fn(0.3, 1.0, 1e-8) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(q_minus(0.5, 30.0, 30.0), OverflowError);
  CHECK(std::isfinite(log_q_minus(0.5, 30.0, 30.0)));
  CHECK_THROWS_AS(q_fn(0.5, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(q_fn(-1.5, 1.0, 1.0), DomainError);
}

TEST_CASE("build_lattice: squared norm equals Q and the tail bound holds") {
  for (int j : {0, 1}) {
    for (double mu : {0.0, 0.3, 0.7}) {
      const auto p = make(j, std::polar(2.1, 0.4), std::polar(1.3, -2.0), mu);
      const auto lat = build_lattice(p, 1e-13);
      const auto [u, v] = p.q_arguments();
      const double ref = std::exp(oracle_log_q(p.q_order(), u, v));
      CHECK(lat.norm_sq() == doctest::Approx(ref).epsilon(1e-12));
      CHECK(lat.tail_mass <= 1e-13);
      CHECK(ref - lat.norm_sq() <= lat.tail_mass * lat.norm_sq() + 1e-14 * ref);
      CHECK(std::abs(overlap(p, p) - ref) < 1e-12 * ref);
      for (const auto& [cell, c] : lat.coeffs) {
        REQUIRE(spectrum::in_sector(j, cell.m, cell.l));
        CHECK(std::abs(c - formal_coefficient(j, cell.m, cell.l, mu, p.z1, p.z2)) <= 1e-15 * std::abs(c));
      }
    }
  }
}

TEST_CASE("build_lattice: errors and degenerate states") {
  CHECK_THROWS_AS(build_lattice(make(1, 0.0, 1.0, 0.3)), DomainError);
  CHECK_THROWS_AS(build_lattice(make(0, 1.0, 0.0, 0.3)), DomainError);
  CHECK_THROWS_AS(build_lattice(make(1, 3.0, 3.0, 0.3), 1e-12, 50), BudgetError);
  CHECK_THROWS_AS(build_lattice(make(1, 40.0, 3.0, 0.3)), OverflowError);
  CHECK_THROWS_AS(build_lattice(make(1, 1.0, 1.0, 1.0)), DomainError);
  // j=1, z1=0, mu=0 keeps only the ground cell; z2=0 keeps the row m=0
  const auto lat = build_lattice(make(1, 0.0, 1.5, 0.0));
  CHECK(lat.l_max == 0);
  CHECK(lat.coeffs.size() == 1);
  CHECK(lat.norm_sq() == 1.0);
  const auto row = build_lattice(make(1, 1.5, 0.0, 0.0), 1e-15);
  CHECK(row.m_max == 0);
  CHECK(row.norm_sq() == doctest::Approx(std::exp(1.5 * 1.5)).epsilon(1e-13));
  CHECK(formal_coefficient(1, 0, -1, 0.0, 1.0, 1.0) == 0.0);
}

TEST_CASE("overlap: complex arguments against the cell sum") {
  for (int j : {0, 1}) {
    const auto p = make(j, std::polar(1.2, 2.9), std::polar(0.8, -2.5), 0.45);
    const auto q = make(j, std::polar(1.0, -2.8), std::polar(1.4, 3.0), 0.45);
    const auto lp = build_lattice(p, 1e-15);
    const auto lq = build_lattice(q, 1e-15);
    cd ref = 0.0;
    for (const auto& [cell, c] : lp.coeffs) ref += std::conj(c) * lq.coefficient(cell.m, cell.l);
    CHECK(std::abs(overlap(p, q) - ref) < 1e-12 * std::abs(ref));
    CHECK(std::abs(overlap(q, p) - std::conj(ref)) < 1e-12 * std::abs(ref));
  }
  CHECK(overlap(make(0, 1.0, 1.0, 0.2), make(1, 1.0, 1.0, 0.2)) == 0.0);
  CHECK_THROWS_AS(overlap(make(1, 1.0, 1.0, 0.2), make(1, 1.0, 1.0, 0.3)), DomainError);
}

TEST_CASE("mean_n: analytic derivative formulas and the lattice") {
  for (int j : {0, 1}) {
    for (double mu : {0.0, 0.3, 0.7}) {
      const auto p = make(j, std::polar(1.9, 1.0), std::polar(2.6, -0.3), mu);
      const double alpha = p.q_order();
      const auto [u, v] = p.q_arguments();
      const double q = std::exp(oracle_log_q(alpha, u, v));
      const double n_v = v * v + v * v * std::pow(v / u, alpha - 1) * boost::math::cyl_bessel_i(alpha - 1, 2 * u * v) / q;
      const double n_u = u * u * std::exp(oracle_log_q(alpha, u, v, 1)) / q;
      const double n1 = j == 1 ? n_v : n_u;
      const double n2 = j == 1 ? n_u : n_v;
      CHECK(mean_n(p, 1) == doctest::Approx(n1).epsilon(1e-8));
      CHECK(mean_n(p, 2) == doctest::Approx(n2).epsilon(1e-8));
      const auto lat = build_lattice(p, 1e-14);
      CHECK(observable_moments(lat, Observable::N1).mean.real() == doctest::Approx(n1).epsilon(1e-11));
      CHECK(observable_moments(lat, Observable::N2).mean.real() == doctest::Approx(n2).epsilon(1e-11));
    }
  }
  // degenerate arguments fall back to the lattice
  CHECK(mean_n(make(1, 1.5, 0.0, 0.0), 1) == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(mean_n(make(1, 1.5, 0.0, 0.0), 2) == 0.0);
  CHECK(mean_n(make(0, 0.0, 1.5, 0.4), 1) == 0.0);
  CHECK_THROWS_AS(mean_n(make(1, 1.0, 1.0, 0.0), 3), DomainError);
}

TEST_CASE("mean_a: contraction factors against lattice ladder sums") {
  for (int j : {0, 1}) {
    for (double mu : {0.0, 0.5}) {
      const auto p = make(j, std::polar(1.4, 0.7), std::polar(1.8, 2.2), mu);
      const auto lat = build_lattice(p, 1e-14);
      const cd a1 = lattice_mean(lat, lat.coeffs, apply_ladder(lat, spectrum::LadderOp::a1));
      const cd a2 = lattice_mean(lat, lat.coeffs, apply_ladder(lat, spectrum::LadderOp::a2));
      CHECK(std::abs(mean_a(p, 1) - a1) < 1e-12);
      CHECK(std::abs(mean_a(p, 2) - a2) < 1e-12);
      // the mode carrying the column index keeps its full amplitude
      CHECK(std::abs(mean_a(p, j == 1 ? 1 : 2) - (j == 1 ? p.z1 : p.z2)) < 1e-15);
    }
  }
  const Units units{1.0, 2.0, 0.5};
  const auto p = make(1, std::polar(1.4, 0.7), std::polar(1.8, 2.2), 0.5);
  const auto g = mean_geometry(p, units);
  const double len = std::sqrt(units.magnetic_length_sq());
  CHECK(g.R_mean == doctest::Approx(len * 1.4));
  CHECK(g.Rc_mean < len * 1.8);
  CHECK(std::abs(g.position_mean - len * (g.a2_mean - std::conj(g.a1_mean))) < 1e-15);
  CHECK(g.var_position > 0.0);
}

TEST_CASE("ladder action on the coherent state equals z times the state with one column adjusted") {
  const double mu = 0.35;
  for (int j : {0, 1}) {
    const auto p = make(j, std::polar(1.1, 0.8), std::polar(1.3, -1.9), mu, 2);
    const auto lat = build_lattice(p, 1e-26);
    const auto range = column_range(p);
    const auto a1 = apply_ladder(lat, spectrum::LadderOp::a1);
    const auto a2 = apply_ladder(lat, spectrum::LadderOp::a2);
    const double sgn = j == 1 ? -1.0 : 1.0;
    for (double rho : {0.05, 0.7, 2.5, 6.0}) {
      for (double phi : {0.3, 2.0, 4.4}) {
        const cd phi_val = coherent_phi(p, phi, rho, range);
        const cd lhs1 = eval_cells(j, mu, p.l0, a1, phi, rho);
        const cd rhs1 = p.z1 * (phi_val - sgn * coherent_column(p, -1, phi, rho));
        CHECK(std::abs(lhs1 - rhs1) < 1e-10 * (1.0 + std::abs(rhs1)));
        const cd lhs2 = eval_cells(j, mu, p.l0, a2, phi, rho);
        const cd rhs2 = p.z2 * (phi_val + sgn * coherent_column(p, 0, phi, rho));
        CHECK(std::abs(lhs2 - rhs2) < 1e-10 * (1.0 + std::abs(rhs2)));
      }
    }
  }
}

TEST_CASE("coherent_phi: column sum equals the cell expansion") {
  for (int j : {0, 1}) {
    const auto p = make(j, std::polar(1.6, -2.6), std::polar(0.9, 2.8), 0.6, -1);
    const auto lat = build_lattice(p, 1e-26);
    const auto range = column_range(p);
    for (double rho : {0.0, 0.4, 3.0, 9.0}) {
      const cd ref = eval_cells(j, p.mu, p.l0, lat.coeffs, 1.1, rho);
      CHECK(std::abs(coherent_phi(p, 1.1, rho, range, YMode::closed) - ref) < 1e-11 * (1 + std::abs(ref)));
      CHECK(std::abs(coherent_phi(p, 1.1, rho, range, YMode::series) - ref) < 1e-11 * (1 + std::abs(ref)));
    }
  }
}

TEST_CASE("observable_moments: position and radii") {
  const Units units;
  for (int j : {0, 1}) {
    const auto p = make(j, std::polar(1.2, 0.3), std::polar(1.5, 1.1), 0.25);
    const auto lat = build_lattice(p, 1e-14);
    const auto x = observable_moments(lat, Observable::X_plus_iY, units);
    const auto r2 = observable_moments(lat, Observable::R2, units);
    const auto rc2 = observable_moments(lat, Observable::Rc2, units);
    CHECK(std::abs(x.mean - std::sqrt(2.0) * (mean_a(p, 2) - std::conj(mean_a(p, 1)))) < 1e-12);
    // <|x+iy|^2> by quadrature, r^2 = 2 rho
    const auto range = column_range(p);
    spectrum::InnerProductOptions opt;
    opt.rho_max = 40.0;
    const auto f = [&](double phi, double rho) { return coherent_phi(p, phi, rho, range); };
    const auto g = [&](double phi, double rho) { return 2.0 * rho * coherent_phi(p, phi, rho, range); };
    const double r_sq = (spectrum::inner_product(f, g, opt) / spectrum::inner_product(f, f, opt)).real();
    CHECK(x.variance + std::norm(x.mean) == doctest::Approx(r_sq).epsilon(1e-9));
    CHECK(r2.mean.real() == doctest::Approx(2.0 * observable_moments(lat, Observable::N1).mean.real() + 1.0));
    CHECK(rc2.mean.real() == doctest::Approx(2.0 * observable_moments(lat, Observable::N2).mean.real() + 1.0));
    CHECK(r2.variance == doctest::Approx(4.0 * observable_moments(lat, Observable::N1).variance));
  }
}

TEST_CASE("write_lattice and read_lattice round trip") {
  const auto lat = build_lattice(make(0, {0.3, -1.2}, {1.1, 0.4}, 0.8, 3));
  std::stringstream ss;
  write_lattice(ss, lat);
  const auto back = read_lattice(ss);
  CHECK(back.params.j == 0);
  CHECK(back.params.l0 == 3);
  CHECK(back.params.z1 == lat.params.z1);
  CHECK(back.coeffs == lat.coeffs);
  CHECK(back.tail_mass == lat.tail_mass);
  std::stringstream bad("# msf-lattice v2\n");
  CHECK_THROWS_AS(read_lattice(bad), DomainError);
  std::stringstream outside("# msf-lattice v1\nj,mu,l0,z1_re,z1_im,z2_re,z2_im,m_max,l_min,l_max,tail_mass\n"
                            "1,0.5,0,1,0,1,0,0,0,0,0\nm,l,re,im\n0,-1,1,0\n");
  CHECK_THROWS_AS(read_lattice(outside), DomainError);
}

TEST_CASE("evolve: mean position moves on a circle with angular frequency omega") {
  const Units units{1.0, 1.0, 2.0};
  const auto p = make(1, std::polar(1.5, 0.2), std::polar(0.8, 1.0), 0.4);
  const cd x0 = mean_geometry(p, units).position_mean;
  const cd center = std::sqrt(units.magnetic_length_sq()) * mean_a(p, 2);
  for (double t : {0.1, 0.9, 2.3}) {
    const auto q = evolve(p, t, units);
    const cd x = std::sqrt(units.magnetic_length_sq()) * (mean_a(q, 2) - std::conj(mean_a(q, 1)));
    CHECK(std::abs(std::abs(x - center) - std::abs(x0 - center)) < 1e-14);
    CHECK(std::abs((x - center) - (x0 - center) * std::polar(1.0, units.omega * t)) < 1e-14);
  }
}

TEST_CASE("wavefunction: prefactor and Schrodinger equation in time") {
  const Units units{1.0, 1.0, 1.0};
  const auto p = make(0, std::polar(1.2, 0.4), std::polar(1.1, -0.6), 0.3);
  const auto range = column_range(p);
  const double pz = 0.7;
  const double r = 1.3, phi = 0.8, z = 0.5, t = 0.4, h = 1e-3;
  auto psi = [&](double tt) { return wavefunction(p, units, pz, tt, r, phi, z, range); };
  const cd dt = (psi(t - 2 * h) - 8.0 * psi(t - h) + 8.0 * psi(t + h) - psi(t + 2 * h)) / (12.0 * h);
  // H Psi for the coherent state: (pz^2/2 + omega (N1 + 1/2)) Psi, with N1 acting on the cells
  const auto q = evolve(p, t, units);
  const auto lat = build_lattice(q, 1e-26);
  CellMap n1_cells;
  for (const auto& [cell, c] : lat.coeffs) n1_cells[cell] = static_cast<double>(cell.m) * c;
  const double rho = r * r / 2.0;
  const cd pre = std::exp(cd(0.0, -((pz * pz / 2.0 + 0.5) * t - pz * z)));
  const cd h_psi = (pz * pz / 2.0 + 0.5) * psi(t) + pre * eval_cells(0, p.mu, p.l0, n1_cells, phi, rho);
  CHECK(std::abs(cd(0.0, 1.0) * dt - h_psi) < 1e-9);
  CHECK(std::abs(wavefunction(p, units, pz, t, r, phi, z) - psi(t)) < 1e-15);
}

TEST_CASE("mixed_mean_a1: pure limits and a direct quadrature of the superposition") {
  const double mu = 0.3;
  const cd z1 = std::polar(1.0, 0.5), z2 = std::polar(1.2, -0.4);
  const auto p0 = make(0, z1, z2, mu);
  const auto p1 = make(1, z1, z2, mu);
  const auto lat0 = build_lattice(p0, 1e-15);
  const auto lat1 = build_lattice(p1, 1e-15);
  CHECK(std::abs(mixed_mean_a1(lat0, lat1, 0.0, 1.0) - z1) < 1e-13);
  CHECK(std::abs(mixed_mean_a1(lat0, lat1, 1.0, 0.0) - mean_a(p0, 1)) < 1e-13);

  const cd c0(0.6, 0.2), c1(-0.3, 0.7);
  const auto r0 = column_range(p0);
  const auto r1 = column_range(p1);
  const auto a1_0 = apply_ladder(lat0, spectrum::LadderOp::a1);
  const auto a1_1 = apply_ladder(lat1, spectrum::LadderOp::a1);
  const auto psi = [&](double phi, double rho) {
    return c0 * coherent_phi(p0, phi, rho, r0) + c1 * coherent_phi(p1, phi, rho, r1);
  };
  const auto a1psi = [&](double phi, double rho) {
    return c0 * eval_cells(0, mu, 0, a1_0, phi, rho) + c1 * eval_cells(1, mu, 0, a1_1, phi, rho);
  };
  spectrum::InnerProductOptions opt;
  opt.rho_max = 40.0;
  const cd ref = spectrum::inner_product(psi, a1psi, opt) / spectrum::inner_product(psi, psi, opt);
  CHECK(std::abs(mixed_mean_a1(lat0, lat1, c0, c1) - ref) < 1e-9);
}

TEST_CASE("malkin_manko_lattice: two-mode Poisson coefficients") {
  const cd z1(0.5, 0.8), z2(-1.1, 0.3);
  const auto mm = malkin_manko_lattice(z1, z2, 10, -6, 6);
  const cd ref = std::pow(z1, 5) * std::pow(z2, 2) / std::sqrt(120.0 * 2.0);
  CHECK(std::abs(mm.at({2, 3}) - ref) < 1e-15);
  const cd ref2 = std::pow(z1, 1) * std::pow(z2, 5) / std::sqrt(1.0 * 120.0);
  CHECK(std::abs(mm.at({1, -4}) - ref2) < 1e-15);
}

TEST_CASE("coefficients: z d/dz acts as the occupation number") {
  const double mu = 0.45;
  const cd z1 = std::polar(1.3, 0.6), z2 = std::polar(0.9, -1.2);
  const double h = 1e-4;
  for (int j : {0, 1}) {
    const auto lat = build_lattice(make(j, z1, z2, mu), 1e-10);
    for (const auto& [cell, c] : lat.coeffs) {
      const auto q = spectrum::formal_qn(j, cell.m, cell.l, mu);
      auto f1 = [&](cd d) { return formal_coefficient(j, cell.m, cell.l, mu, z1 + d, z2); };
      auto f2 = [&](cd d) { return formal_coefficient(j, cell.m, cell.l, mu, z1, z2 + d); };
      // holomorphic in z away from the cut: derivative along the real direction
      const cd d1 = (f1(-2 * h) - 8.0 * f1(-h) + 8.0 * f1(h) - f1(2 * h)) / (12.0 * h);
      const cd d2 = (f2(-2 * h) - 8.0 * f2(-h) + 8.0 * f2(h) - f2(2 * h)) / (12.0 * h);
      CHECK(std::abs(z1 * d1 - q.n1 * c) < 1e-8 * (1.0 + std::abs(q.n1 * c)));
      CHECK(std::abs(z2 * d2 - q.n2 * c) < 1e-8 * (1.0 + std::abs(q.n2 * c)));
    }
  }
}

TEST_CASE("evolve: full and half periods") {
  const Units units{1.0, 1.0, 2.5};
  const auto p = make(1, {0.4, 1.2}, {-0.3, 0.8}, 0.2);
  const double period = 2.0 * std::numbers::pi / units.omega;
  CHECK(std::abs(evolve(p, period, units).z1 - p.z1) < 1e-14);
  CHECK(std::abs(evolve(p, 0.5 * period, units).z1 + p.z1) < 1e-14);
  CHECK(evolve(p, 0.7, units).z2 == p.z2);
}

TEST_CASE("wavefunction: vanishes at the flux line for mu > 0 in sector j=1") {
  const Units units;
  const auto p = make(1, {1.0, 0.5}, {0.7, -0.2}, 0.4);
  CHECK(std::abs(wavefunction(p, units, 0.3, 0.2, 0.0, 1.0, 0.0)) < 1e-300);
  // global phase after one period
  const double period = 2.0 * std::numbers::pi;
  const double theta = (0.3 * 0.3 / 2.0 + 0.5) * period;
  const cd a = wavefunction(p, units, 0.3, 0.2, 1.1, 0.4, 0.5);
  const cd b = wavefunction(p, units, 0.3, 0.2 + period, 1.1, 0.4, 0.5);
  CHECK(std::abs(b - std::polar(1.0, -theta) * a) < 1e-12);
}
