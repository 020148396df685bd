#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "msf/classical.hpp"
#include "msf/coherent.hpp"
#include "msf/harness/checks.hpp"
#include "msf/harness/config.hpp"
#include "msf/series.hpp"
#include "msf/special_functions.hpp"
#include "msf/spectrum.hpp"

namespace msf::harness {

using cd = std::complex<double>;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

CheckResult bound(const std::string& id, const std::string& title, double measured, double threshold) {
  CheckResult r;
  r.id = id;
  r.title = title;
  r.measured = measured;
  r.threshold = threshold;
  r.comparison = "<=";
  r.passed = measured <= threshold;
  return r;
}

coherent::CoherentParams params(int j, cd z1, cd z2, double mu) {
  coherent::CoherentParams p;
  p.j = j;
  p.z1 = z1;
  p.z2 = z2;
  p.mu = mu;
  return p;
}

// sum_m z^m I_{alpha+m,m}(x) / sqrt(Gamma(1+m) Gamma(1+alpha+m)) = z^{-alpha/2} e^{z-x/2} J_alpha(2 sqrt(xz))
CheckResult bessel_sum(const CheckContext& ctx) {
  std::mt19937_64 rng(ctx.seed + 10);
  std::uniform_real_distribution<double> zd(0.01, 5.0), xd(0.01, 20.0);
  double worst = 0.0;
  for (double alpha : {0.3, 1.5}) {
    for (int i = 0; i < 40; ++i) {
      const double z = zd(rng), x = xd(rng);
      special::LaguerreFunctionSequence seq(alpha, x);
      special::SeriesAccumulator<double> acc(1e-15);
      for (int m = 0; m < 5000; ++m) {
        const double lc = m * std::log(z) - 0.5 * (special::log_gamma(m + 1.0) + special::log_gamma(alpha + m + 1.0));
        if (acc.add(std::exp(lc) * seq.value())) break;
        seq.advance();
      }
      const double rhs = std::pow(z, -0.5 * alpha) * std::exp(z - 0.5 * x) * special::bessel_j(alpha, 2.0 * std::sqrt(x * z));
      worst = std::max(worst, std::abs(acc.sum() - rhs) / std::max(1.0, std::abs(rhs)));
    }
  }
  return bound("I1", "Laguerre generating sum equals the Bessel closed form", worst, 1e-9);
}

CheckResult laguerre_origin(const CheckContext&) {
  double worst = 0.0;
  const double rho = 1e-12;
  for (double alpha : {0.0, 0.3, 1.7}) {
    for (int m : {0, 1, 5, 12}) {
      // I ~ rho^{alpha/2} sqrt(Gamma(m+alpha+1)/m!) / Gamma(alpha+1)
      const double lim = std::exp(0.5 * (special::log_gamma(m + alpha + 1.0) - special::log_gamma(m + 1.0)) -
                                  special::log_gamma(alpha + 1.0));
      const double v = special::laguerre_fn(alpha, m, rho) / std::pow(rho, 0.5 * alpha);
      worst = std::max(worst, std::abs(v / lim - 1.0));
    }
  }
  return bound("I2", "Laguerre functions near the origin behave as rho^{alpha/2}", worst, 1e-9);
}

CheckResult laguerre_explicit(const CheckContext&) {
  double worst = 0.0;
  for (double alpha : {0.0, 0.3, 1.7}) {
    for (int m = 0; m <= 10; ++m) {
      for (double rho : {0.5, 3.0, 9.0}) {
        long double s = 0.0L;
        for (int i = 0; i <= m; ++i) {
          const long double binom = std::exp(std::lgamma(static_cast<long double>(alpha + m + 1)) -
                                             std::lgamma(static_cast<long double>(m - i + 1)) -
                                             std::lgamma(static_cast<long double>(alpha + i + 1)));
          const long double term = binom * std::pow(static_cast<long double>(rho), i) /
                                   std::tgamma(static_cast<long double>(i + 1));
          s += (i % 2 == 0) ? term : -term;
        }
        const double ref = static_cast<double>(s);
        worst = std::max(worst, std::abs(special::laguerre_poly(m, alpha, rho) - ref) / std::max(1.0, std::abs(ref)));
      }
    }
  }
  return bound("I3", "Laguerre recurrence matches the explicit sum for m <= 10", worst, 1e-10);
}

CheckResult classical_conservation(const CheckContext& ctx) {
  std::mt19937_64 rng(ctx.seed + 11);
  std::uniform_real_distribution<double> rd(0.2, 3.0), ad(-kPi, kPi), td(0.0, 50.0);
  const auto& u = ctx.units;
  const FluxConfig flux = FluxConfig::from_parts(1, 0.35);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    classical::ClassicalOrbit o;
    o.R = rd(rng);
    o.Rc = rd(rng);
    o.psi0 = ad(rng);
    o.alpha_c = ad(rng);
    o.pz = 0.4;
    const auto obs = classical::classical_observables(o, u, flux);
    const auto a0 = classical::classical_a(o, u, 0.0);
    for (int i = 0; i < 100; ++i) {
      const double t = td(rng);
      const auto s = classical::orbit_state(o, u, t);
      const auto p = classical::canonical_momentum(s, u, flux);
      const double energy = 0.5 * (s.Px * s.Px + s.Py * s.Py) / u.mass;
      const double lz = s.x * p.py - s.y * p.px;
      const auto a = classical::classical_a(s, u);
      const double psi = u.omega * t + o.psi0;
      worst = std::max({worst, std::abs(energy - obs.energy) / std::max(1.0, obs.energy),
                        std::abs(lz - obs.lz) / std::max(1.0, std::abs(obs.lz)),
                        std::abs(std::abs(a.a1) - std::abs(a0.a1)), std::abs(a.a2 - a0.a2),
                        std::abs(a.a1 * std::polar(1.0, psi) - a0.a1 * std::polar(1.0, o.psi0))});
    }
  }
  return bound("I4", "E, L_z, |a1|, a2 and a1 e^{i psi} are conserved along orbits", worst, 1e-12);
}

CheckResult classical_relations(const CheckContext& ctx) {
  std::mt19937_64 rng(ctx.seed + 12);
  std::uniform_real_distribution<double> rd(0.2, 3.0), ad(-kPi, kPi), td(0.0, 20.0);
  const auto& u = ctx.units;
  const FluxConfig flux = FluxConfig::from_parts(-2, 0.6);
  const double len = std::sqrt(u.magnetic_length_sq());
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    classical::ClassicalOrbit o;
    o.R = rd(rng);
    o.Rc = rd(rng);
    o.psi0 = ad(rng);
    o.alpha_c = ad(rng);
    const auto obs = classical::classical_observables(o, u, flux);
    for (int i = 0; i < 10; ++i) {
      const double t = td(rng);
      const auto s = classical::orbit_state(o, u, t);
      const auto a = classical::classical_a(s, u);
      const double r2 = s.x * s.x + s.y * s.y;
      const double psi = u.omega * t + o.psi0;
      worst = std::max({worst, std::abs(o.R * o.R - len * len * std::norm(a.a1)),
                        std::abs(o.Rc * o.Rc - len * len * std::norm(a.a2)),
                        std::abs(cd(s.x, s.y) - len * (a.a2 - std::conj(a.a1))),
                        std::abs(obs.energy - u.hbar * u.omega * std::norm(a.a1)),
                        std::abs(obs.lz - (u.hbar * (std::norm(a.a1) - std::norm(a.a2)) - u.hbar * (flux.l0 + flux.mu))),
                        std::abs(r2 - (o.R * o.R + o.Rc * o.Rc + 2.0 * o.R * o.Rc * std::cos(psi - o.alpha_c)))});
    }
    // the extreme distances are reached where psi = alpha_c and psi = alpha_c + pi
    const double t_far = (o.alpha_c - o.psi0) / u.omega;
    const double t_near = t_far + kPi / u.omega;
    const auto far = classical::orbit_state(o, u, t_far);
    const auto near = classical::orbit_state(o, u, t_near);
    worst = std::max({worst, std::abs(std::hypot(far.x, far.y) - (o.R + o.Rc)),
                      std::abs(std::hypot(near.x, near.y) - std::abs(o.R - o.Rc)),
                      std::abs(o.r_max() - (o.R + o.Rc)), std::abs(o.r_min() - std::abs(o.R - o.Rc))});
  }
  return bound("I5", "classical radii, invariants and r(t) relations", worst, 1e-10);
}

// ladder operators in Cartesian form, natural units, applied by finite differences
cd apply_cartesian(spectrum::LadderOp op, const spectrum::QuantumNumbers& q, int l0, double x, double y) {
  auto f = [&](double xx, double yy) {
    return spectrum::formal_eigenfunction(q, l0, std::atan2(yy, xx), 0.5 * (xx * xx + yy * yy));
  };
  const double h = 1e-3;
  auto d = [&](double ex, double ey) {
    return (-f(x + 2 * h * ex, y + 2 * h * ey) + 8.0 * f(x + h * ex, y + h * ey) - 8.0 * f(x - h * ex, y - h * ey) +
            f(x - 2 * h * ex, y - 2 * h * ey)) /
           (12.0 * h);
  };
  const cd i(0.0, 1.0);
  const double k = (l0 + q.mu) / (x * x + y * y) + 0.5;
  const cd v = f(x, y);
  const cd px = -i * d(1, 0) - k * y * v;
  const cd py = -i * d(0, 1) + k * x * v;
  const double s = std::sqrt(2.0);
  switch (op) {
    case spectrum::LadderOp::a1:
      return (-i * px - py) / s;
    case spectrum::LadderOp::a1_dag:
      return (i * px - py) / s;
    case spectrum::LadderOp::a2:
      return ((x + i * y) * v + i * px - py) / s;
    case spectrum::LadderOp::a2_dag:
      return ((x - i * y) * v - i * px - py) / s;
  }
  return 0.0;
}

CheckResult ladder_differential(const CheckContext& ctx) {
  std::mt19937_64 rng(ctx.seed + 13);
  std::uniform_real_distribution<double> rd(0.6, 2.5), ad(-kPi, kPi);
  double worst = 0.0;
  for (double mu : {0.0, 0.45}) {
    for (int l : {-2, -1, 0, 3}) {
      for (int m : {0, 2}) {
        const auto q = spectrum::make_qn(l >= 0 ? 1 : 0, m, l, mu);
        for (auto op : {spectrum::LadderOp::a1, spectrum::LadderOp::a1_dag, spectrum::LadderOp::a2,
                        spectrum::LadderOp::a2_dag}) {
          const auto res = spectrum::ladder_apply(op, q);
          const double r = rd(rng), phi = ad(rng);
          const double x = r * std::cos(phi), y = r * std::sin(phi);
          cd rhs = 0.0;
          if (res.kind != spectrum::TargetKind::zero) {
            rhs = res.coefficient * spectrum::formal_eigenfunction(res.target, 1, phi, 0.5 * r * r);
          }
          worst = std::max(worst, std::abs(apply_cartesian(op, q, 1, x, y) - rhs));
        }
      }
    }
  }
  return bound("I6", "ladder coefficients match the differential operators", worst, 1e-6);
}

CheckResult orthonormal_sample(const CheckContext& ctx) {
  std::mt19937_64 rng(ctx.seed + 14);
  std::uniform_int_distribution<int> md(0, 6), ld(-4, 4);
  std::vector<spectrum::QuantumNumbers> states;
  for (int i = 0; i < 30; ++i) {
    const int l = ld(rng);
    states.push_back(spectrum::make_qn(l >= 0 ? 1 : 0, md(rng), l, 0.3));
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < states.size(); ++a) {
    for (std::size_t b = a; b < states.size(); ++b) {
      const bool same = states[a].m == states[b].m && states[a].l == states[b].l;
      worst = std::max(worst, std::abs(spectrum::inner_product(states[a], states[b], 0) - (same ? 1.0 : 0.0)));
    }
  }
  return bound("I7", "30 sampled eigenstates are orthonormal", worst, 1e-8);
}

CheckResult lattice_normalization(const CheckContext& ctx) {
  std::mt19937_64 rng(ctx.seed + 15);
  std::uniform_real_distribution<double> md(0.2, 4.0), ad(-kPi, kPi), mud(0.0, 0.99);
  double worst = 0.0;
  for (int i = 0; i < 12; ++i) {
    const auto p = params(i % 2, std::polar(md(rng), ad(rng)), std::polar(md(rng), ad(rng)), mud(rng));
    const auto lat = coherent::build_lattice(p, 1e-12);
    worst = std::max(worst, std::abs(lat.norm_sq() / coherent::overlap(p, p).real() - 1.0));
  }
  return bound("I8", "lattice squared norm equals the overlap Q", worst, 1e-8);
}

// a1 Phi = z1 (Phi + formal column l=-1) for j=1 and z1 (Phi - column l=-1) for j=0, cell by cell;
// a2 Phi = z2 (Phi - column l=0) for j=1 and z2 (Phi + formal column l=0) for j=0.
CheckResult ladder_on_coherent(const CheckContext& ctx) {
  std::mt19937_64 rng(ctx.seed + 16);
  std::uniform_real_distribution<double> md(0.3, 2.5), ad(-kPi, kPi), mud(0.05, 0.95);
  double worst = 0.0;
  for (int i = 0; i < 8; ++i) {
    const int j = i % 2;
    const auto p = params(j, std::polar(md(rng), ad(rng)), std::polar(md(rng), ad(rng)), mud(rng));
    const auto lat = coherent::build_lattice(p, 1e-24);
    const double scale = std::sqrt(lat.norm_sq());
    for (int s : {1, 2}) {
      const auto op = s == 1 ? spectrum::LadderOp::a1 : spectrum::LadderOp::a2;
      const int col = s == 1 ? -1 : 0;
      const cd z = s == 1 ? p.z1 : p.z2;
      coherent::CellMap expect;
      for (const auto& [cell, c] : lat.coeffs) {
        if (cell.l != col) expect[cell] = z * c;
      }
      const bool formal = (j == 1) == (s == 1);  // the adjusted column lies outside the sector
      if (formal) {
        for (int m = 0; m <= lat.m_max + 1; ++m) {
          const cd c = coherent::formal_coefficient(j, m, col, p.mu, p.z1, p.z2);
          if (c != 0.0) expect[{m, col}] = z * c;
        }
      }
      auto got = coherent::apply_ladder(lat, op);
      for (const auto& [cell, c] : expect) got[cell] -= c;
      for (const auto& [cell, c] : got) worst = std::max(worst, std::abs(c) / scale);
    }
  }
  return bound("I9", "ladder operators on coherent states act as z with one column adjusted", worst, 1e-9);
}

CheckResult occupation_derivative(const CheckContext& ctx) {
  std::mt19937_64 rng(ctx.seed + 17);
  std::uniform_real_distribution<double> md(0.5, 2.0), ad(-2.5, 2.5), mud(0.0, 0.99);
  double worst = 0.0;
  const double h = 1e-4;
  for (int i = 0; i < 4; ++i) {
    const int j = i % 2;
    const auto p = params(j, std::polar(md(rng), ad(rng)), std::polar(md(rng), ad(rng)), mud(rng));
    const auto lat = coherent::build_lattice(p, 1e-10);
    for (const auto& [cell, c] : lat.coeffs) {
      const auto q = spectrum::formal_qn(j, cell.m, cell.l, p.mu);
      auto c1 = [&](double d) { return coherent::formal_coefficient(j, cell.m, cell.l, p.mu, p.z1 + d, p.z2); };
      auto c2 = [&](double d) { return coherent::formal_coefficient(j, cell.m, cell.l, p.mu, p.z1, p.z2 + d); };
      const cd d1 = (c1(-2 * h) - 8.0 * c1(-h) + 8.0 * c1(h) - c1(2 * h)) / (12.0 * h);
      const cd d2 = (c2(-2 * h) - 8.0 * c2(-h) + 8.0 * c2(h) - c2(2 * h)) / (12.0 * h);
      worst = std::max({worst, std::abs(p.z1 * d1 - q.n1 * c) / (1.0 + std::abs(q.n1 * c)),
                        std::abs(p.z2 * d2 - q.n2 * c) / (1.0 + std::abs(q.n2 * c))});
    }
  }
  return bound("I10", "z_k d/dz_k on coefficients equals the occupation N_k", worst, 1e-8);
}

CheckResult mixed_contrast(const CheckContext&) {
  const double mu = 0.5;
  const cd z1 = 2.0, z2 = 2.0;
  const auto lat0 = coherent::build_lattice(params(0, z1, z2, mu), 1e-14);
  const auto lat1 = coherent::build_lattice(params(1, z1, z2, mu), 1e-14);
  const cd c = 1.0 / std::sqrt(2.0);
  const cd mixed = coherent::mixed_mean_a1(lat0, lat1, c, c);
  const cd pure = coherent::lattice_mean(lat1, lat1.coeffs, coherent::apply_ladder(lat1, spectrum::LadderOp::a1));
  const double dev_mixed = std::abs(mixed - z1);
  const double dev_pure = std::abs(pure - z1);
  CheckResult r;
  r.id = "I11";
  r.title = "two-sector superposition moves <a1> away from z1";
  r.measured = dev_mixed;
  r.threshold = 10.0 * dev_pure;
  r.comparison = ">";
  r.passed = dev_mixed > 10.0 * dev_pure;
  r.details = {{"mixed_a1", {mixed.real(), mixed.imag()}}, {"pure_deviation", dev_pure}};
  return r;
}

CheckResult far_regime_overlay(const CheckContext& ctx) {
  const double len = std::sqrt(ctx.units.magnetic_length_sq());
  double worst = 0.0;
  json pts = json::array();
  for (int j : {0, 1}) {
    for (double mu : {0.2, 0.7}) {
      const cd z1 = j == 1 ? cd(4.0, 0.5) : cd(1.0, -0.2);
      const cd z2 = j == 1 ? cd(1.0, 0.3) : cd(0.4, 4.0);
      const auto g = coherent::mean_geometry(params(j, z1, z2, mu), ctx.units);
      const auto orbit = classical::orbit_from_a(z1, z2, ctx.units);
      const double eR = std::abs(g.R_mean - orbit.R) / orbit.R;
      const double eRc = std::abs(g.Rc_mean - orbit.Rc) / orbit.Rc;
      worst = std::max({worst, eR, eRc, std::abs(orbit.R - len * std::abs(z1)) / orbit.R});
      pts.push_back({{"j", j}, {"mu", mu}, {"R_rel_error", eR}, {"Rc_rel_error", eRc}});
    }
  }
  auto r = bound("I12", "far from the solenoid the mean radii match the classical orbit", worst, 0.01);
  r.details["points"] = pts;
  return r;
}

CheckResult config_rejection(const CheckContext&) {
  int accepted = 0;
  for (const char* text : {R"({"flux": {"mu": 1.2}})", R"({"flux": {"mu": -0.1}})", R"({"units": {"omega": 0}})",
                           R"({"coherent": {"j": 2}})", R"({"bogus": 1})"}) {
    try {
      config_from_json(json::parse(text));
      ++accepted;
    } catch (const ConfigError&) {
    }
  }
  return bound("I13", "invalid configurations are rejected before a run", accepted, 0);
}

}  // namespace

std::vector<CheckResult> run_invariants(const CheckContext& ctx) {
  ctx.units.validate();
  return {bessel_sum(ctx),         laguerre_origin(ctx),     laguerre_explicit(ctx),  classical_conservation(ctx),
          classical_relations(ctx), ladder_differential(ctx), orthonormal_sample(ctx), lattice_normalization(ctx),
          ladder_on_coherent(ctx),  occupation_derivative(ctx), mixed_contrast(ctx),  far_regime_overlay(ctx),
          config_rejection(ctx)};
}

}  // namespace msf::harness
