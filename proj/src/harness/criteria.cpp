#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>

#include "msf/coherent.hpp"
#include "msf/harness/checks.hpp"
#include "msf/quadrature.hpp"
#include "msf/special_functions.hpp"
#include "msf/spectrum.hpp"

namespace msf::harness {

using cd = std::complex<double>;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

CheckResult make_result(const std::string& id, const std::string& title, double measured, double threshold,
                        const std::string& cmp) {
  CheckResult r;
  r.id = id;
  r.title = title;
  r.measured = measured;
  r.threshold = threshold;
  r.comparison = cmp;
  if (cmp == "<") r.passed = measured < threshold;
  else if (cmp == "<=") r.passed = measured <= threshold;
  else if (cmp == ">") r.passed = measured > threshold;
  else r.passed = measured >= threshold;
  return r;
}

coherent::CoherentParams params(int j, cd z1, cd z2, double mu, int l0 = 0) {
  coherent::CoherentParams p;
  p.j = j;
  p.z1 = z1;
  p.z2 = z2;
  p.mu = mu;
  p.l0 = l0;
  return p;
}

double rel_err(cd a, cd b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// 1. Laguerre orthonormality
CheckResult orthonormality(const CheckContext&) {
  double worst = 0.0;
  json where;
  quad::QuadOptions opt;
  opt.abs_tol = 1e-14;
  opt.rel_tol = 1e-14;
  for (double alpha : {0.0, 0.3, 1.0, 1.7}) {
    for (int k = 0; k <= 20; ++k) {
      for (int m = 0; m <= k; ++m) {
        const double cut = quad::envelope_cutoff(alpha + 2.0 * k, 1e-18);
        const auto r = quad::integrate(
            [&](double rho) { return special::laguerre_fn(alpha, k, rho) * special::laguerre_fn(alpha, m, rho); },
            0.0, cut, opt);
        const double err = std::abs(r.value - (k == m ? 1.0 : 0.0));
        if (err > worst) {
          worst = err;
          where = {{"alpha", alpha}, {"k", k}, {"m", m}};
        }
      }
    }
  }
  auto res = make_result("C1", "Laguerre functions are orthonormal", worst, 1e-8, "<=");
  res.details["worst_case"] = where;
  return res;
}

// 2. Y series against the closed form
CheckResult y_agreement(const CheckContext& ctx) {
  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> ad(0.0, 3.0), md(0.1, 2.0), ph(-kPi, kPi), rd(0.0, 15.0);
  double worst = 0.0;
  json where;
  for (int i = 0; i < 200; ++i) {
    const double alpha = ad(rng);
    const cd z1 = std::polar(md(rng), ph(rng));
    const cd z2 = std::polar(md(rng), ph(rng));
    const double rho = rd(rng);
    const cd s = coherent::y_fn(alpha, z1, z2, rho, coherent::YMode::series);
    const cd c = coherent::y_fn(alpha, z1, z2, rho, coherent::YMode::closed);
    const double err = std::abs(s - c) / std::max(std::abs(c), 1e-300);
    if (err > worst) {
      worst = err;
      where = {{"alpha", alpha}, {"rho", rho}, {"z1", {z1.real(), z1.imag()}}, {"z2", {z2.real(), z2.imag()}}};
    }
  }
  auto res = make_result("C2", "Y series matches its closed form on 200 random points", worst, 1e-9, "<=");
  res.details["worst_case"] = where;
  return res;
}

// 3. Q^- against its integral representation
CheckResult q_consistency(const CheckContext& ctx) {
  std::mt19937_64 rng(ctx.seed + 1);
  std::uniform_real_distribution<double> ad(0.1, 1.9), ud(0.5, 4.0);
  double worst = 0.0;
  json where;
  for (int i = 0; i < 200; ++i) {
    const double alpha = ad(rng), u = ud(rng), v = ud(rng);
    const double diff = coherent::log_q_minus(alpha, u, v) - (u * u + v * v + std::log(coherent::one_minus_t(alpha, u, v)));
    const double err = std::abs(std::expm1(diff));
    if (err > worst) {
      worst = err;
      where = {{"alpha", alpha}, {"u", u}, {"v", v}};
    }
  }
  auto res = make_result("C3", "Q^- series equals e^{u^2+v^2}(1-T)", worst, 1e-8, "<=");
  res.details["worst_case"] = where;
  return res;
}

// 4. Semiclassical limit of the occupation means
CheckResult semiclassical_means(const CheckContext&) {
  const auto p = params(1, 5.0, 3.0, 0.5);
  const double n1 = coherent::mean_n(p, 1);
  const double n2 = coherent::mean_n(p, 2);
  auto res = make_result("C4", "<N1> ~ |z1|^2 and <N2> ~ |z2|^2 at |z1|=5, |z2|=3, mu=0.5",
                         std::max(std::abs(n1 - 25.0), std::abs(n2 - 9.0)), 1e-3, "<");
  res.details = {{"n1_mean", n1}, {"n2_mean", n2}, {"residual_n1", n1 - 25.0}, {"residual_n2", n2 - 9.0}};
  return res;
}

// 5. Analytic means against the coefficient lattice
CheckResult oracle_equivalence(const CheckContext& ctx) {
  std::mt19937_64 rng(ctx.seed + 2);
  std::uniform_real_distribution<double> md(0.3, 4.0), ph(-kPi, kPi);
  double worst = 0.0;
  json where;
  int points = 0;
  for (int j : {0, 1}) {
    for (double mu : {0.0, 0.3, 0.7}) {
      for (int i = 0; i < 4; ++i) {
        const auto p = params(j, std::polar(md(rng), ph(rng)), std::polar(md(rng), ph(rng)), mu);
        const auto lat = coherent::build_lattice(p, 1e-14);
        const double len = std::sqrt(ctx.units.magnetic_length_sq());
        const cd a1 = coherent::lattice_mean(lat, lat.coeffs, coherent::apply_ladder(lat, spectrum::LadderOp::a1));
        const cd a2 = coherent::lattice_mean(lat, lat.coeffs, coherent::apply_ladder(lat, spectrum::LadderOp::a2));
        const auto x = coherent::observable_moments(lat, coherent::Observable::X_plus_iY, ctx.units);
        const auto g = coherent::mean_geometry(p, ctx.units);
        const double errs[] = {
            rel_err(g.n1_mean, coherent::observable_moments(lat, coherent::Observable::N1).mean),
            rel_err(g.n2_mean, coherent::observable_moments(lat, coherent::Observable::N2).mean),
            rel_err(g.a1_mean, a1),
            rel_err(g.a2_mean, a2),
            rel_err(g.position_mean, x.mean),
            rel_err(g.R_mean, len * std::abs(a1)),
            rel_err(g.Rc_mean, len * std::abs(a2)),
        };
        for (double e : errs) {
          if (e > worst) {
            worst = e;
            where = {{"j", j}, {"mu", mu}, {"z1", {p.z1.real(), p.z1.imag()}}, {"z2", {p.z2.real(), p.z2.imag()}}};
          }
        }
        ++points;
      }
    }
  }
  auto res = make_result("C5", "analytic means agree with the lattice (both sectors)", worst, 1e-7, "<=");
  res.details["points"] = points;
  res.details["worst_case"] = where;
  return res;
}

// 6. Mean position moves on a circle at frequency omega
CheckResult trajectory_circle(const CheckContext& ctx) {
  const int samples = 64;
  const double period = 2.0 * kPi / ctx.units.omega;
  double worst_fit = 0.0;
  double worst_freq = 0.0;
  json per_sector = json::array();
  for (int j : {0, 1}) {
    const auto p = params(j, std::polar(1.8, 0.6), std::polar(1.3, -0.9), 0.35);
    std::vector<double> t(samples), x(samples), y(samples);
    for (int i = 0; i < samples; ++i) {
      t[i] = period * i / samples;
      const auto g = coherent::mean_geometry(coherent::evolve(p, t[i], ctx.units), ctx.units);
      x[i] = g.position_mean.real();
      y[i] = g.position_mean.imag();
    }
    const auto fit = fit_circle(x, y);
    const double w = angular_frequency(t, x, y, fit.cx, fit.cy);
    const double freq_err = std::abs(w - ctx.units.omega) / ctx.units.omega;
    const double len = std::sqrt(ctx.units.magnetic_length_sq());
    const cd center = len * coherent::mean_a(p, 2);
    worst_fit = std::max(worst_fit, fit.residual);
    worst_freq = std::max(worst_freq, freq_err);
    per_sector.push_back({{"j", j},
                          {"fit_residual", fit.residual},
                          {"frequency", w},
                          {"frequency_rel_error", freq_err},
                          {"center_error", std::abs(cd(fit.cx, fit.cy) - center)},
                          {"radius_error", std::abs(fit.radius - len * std::abs(coherent::mean_a(p, 1)))}});
  }
  // both requirements must hold; report the larger normalized excess
  auto res = make_result("C6", "mean position traces a circle at angular frequency omega",
                         std::max(worst_fit, worst_freq), 1e-10, "<");
  res.details = {{"max_fit_residual", worst_fit}, {"max_frequency_rel_error", worst_freq}, {"sectors", per_sector}};
  return res;
}

// 7. Delta < 1 and the contracted mean radii
CheckResult delta_inequalities(const CheckContext& ctx) {
  std::mt19937_64 rng(ctx.seed + 3);
  std::uniform_real_distribution<double> md(0.2, 5.0), mud(0.01, 0.99), ph(-kPi, kPi);
  const double len = std::sqrt(ctx.units.magnetic_length_sq());
  double max_delta = 0.0;
  int violations = 0;
  for (int i = 0; i < 100; ++i) {
    const double a1 = md(rng), a2 = md(rng), mu = mud(rng);
    const cd z1 = std::polar(a1, ph(rng)), z2 = std::polar(a2, ph(rng));
    const double d0 = coherent::delta_fn(1.0 - mu, a1, a2);
    const double d1 = coherent::delta_fn(mu, a2, a1);
    const auto g1 = coherent::mean_geometry(params(1, z1, z2, mu), ctx.units);
    const auto g0 = coherent::mean_geometry(params(0, z1, z2, mu), ctx.units);
    if (!(d0 < 1.0) || !(d1 < 1.0) || !(g1.Rc_mean < len * a2) || !(g0.R_mean < len * a1)) ++violations;
    max_delta = std::max({max_delta, d0, d1});
  }
  auto res = make_result("C7", "Delta < 1, so Rc_mean(j=1) < len|z2| and R_mean(j=0) < len|z1|", violations, 0, "<=");
  res.details = {{"samples", 100}, {"max_delta", max_delta}, {"violations", violations}};
  return res;
}

// 8. Splitting of the Landau levels
CheckResult spectrum_splitting(const CheckContext&) {
  double worst = 0.0;
  int bad = 0;
  std::set<double> shifted, landau;
  for (const auto& e : spectrum::level_diagram(0.3, 6, -6, 6)) {
    const double expect = e.qn.j == 0 ? e.qn.m + 0.5 : e.qn.m + e.qn.l + 0.8;
    worst = std::max(worst, std::abs(e.energy - expect));
    const double frac = e.energy - std::floor(e.energy);
    if (std::abs(frac - (e.qn.j == 0 ? 0.5 : 0.8)) > 1e-12) ++bad;
    (e.qn.j == 0 ? landau : shifted).insert(e.energy);
  }
  int half_bad = 0;
  for (const auto& e : spectrum::level_diagram(0.0, 6, -6, 6)) {
    const double frac = e.energy - std::floor(e.energy);
    worst = std::max(worst, std::abs(frac - 0.5));
    if (frac != 0.5) ++half_bad;
  }
  if (shifted.empty() || landau.empty()) ++bad;
  auto res = make_result("C8", "mu=0.3 gives ladders m+1/2 and m+l+0.8; mu=0 gives half-integers", worst, 1e-12, "<=");
  res.passed = res.passed && bad == 0 && half_bad == 0;
  res.details = {{"off_ladder_levels", bad}, {"non_half_integer_levels_mu0", half_bad},
                 {"landau_ladder_size", landau.size()}, {"shifted_ladder_size", shifted.size()}};
  return res;
}

// 9. <R^2 - Rc^2> on eigenstates from quadrature of r^2 and L_z
CheckResult sector_indicator(const CheckContext& ctx) {
  const auto& u = ctx.units;
  const double s = u.hbar / (u.mass * u.omega);
  const int l0 = 1;
  double worst = 0.0;
  int sign_bad = 0;
  for (double mu : {0.0, 0.3, 0.75}) {
    for (int l : {-3, -1, 0, 2}) {
      for (int m : {0, 3}) {
        const auto q = spectrum::make_qn(l >= 0 ? 1 : 0, m, l, mu);
        spectrum::InnerProductOptions opt;
        opt.rho_max = spectrum::radial_cutoff(q);
        auto f = [&](double phi, double rho) { return spectrum::eigenfunction(q, l0, phi, rho); };
        // r^2 = magnetic_length_sq * rho
        const double r2 =
            spectrum::inner_product(f, [&](double phi, double rho) { return u.magnetic_length_sq() * rho * f(phi, rho); },
                                    opt)
                .real();
        const double h = 1e-3;
        auto lz_f = [&](double phi, double rho) {
          return cd(0.0, -u.hbar) *
                 (-f(phi + 2 * h, rho) + 8.0 * f(phi + h, rho) - 8.0 * f(phi - h, rho) + f(phi - 2 * h, rho)) /
                 (12.0 * h);
        };
        const double lz = spectrum::inner_product(f, lz_f, opt).real();
        const double diff = 2.0 * (lz + u.hbar * (l0 + mu)) / (u.mass * u.omega);
        const double R2 = 0.5 * (r2 + diff);
        const double Rc2 = 0.5 * (r2 - diff);
        worst = std::max({worst, std::abs(diff - 2.0 * s * (l + mu)), std::abs(R2 - s * (2.0 * q.n1 + 1.0)),
                          std::abs(Rc2 - s * (2.0 * q.n2 + 1.0))});
        if (l + mu != 0.0 && (diff > 0.0) != (l >= 0)) ++sign_bad;
      }
    }
  }
  auto res = make_result("C9", "<R^2 - Rc^2> = 2 hbar (l+mu)/(M omega) on eigenstates", worst, 1e-9, "<=");
  res.passed = res.passed && sign_bad == 0;
  res.details = {{"sign_mismatches", sign_bad}};
  return res;
}

// 10. mu = 0: both sectors together form the two-mode coherent state
CheckResult malkin_manko(const CheckContext& ctx) {
  std::mt19937_64 rng(ctx.seed + 4);
  std::uniform_real_distribution<double> md(0.3, 3.0), ph(-kPi, kPi);
  double worst = 1.0;
  double worst_norm = 0.0;
  for (int i = 0; i < 6; ++i) {
    const cd z1 = std::polar(md(rng), ph(rng)), z2 = std::polar(md(rng), ph(rng));
    const auto lat0 = coherent::build_lattice(params(0, z1, z2, 0.0), 1e-14);
    const auto lat1 = coherent::build_lattice(params(1, z1, z2, 0.0), 1e-14);
    coherent::CellMap combined = lat0.coeffs;
    combined.insert(lat1.coeffs.begin(), lat1.coeffs.end());
    const int m_max = std::max(lat0.m_max, lat1.m_max);
    const auto mm = coherent::malkin_manko_lattice(z1, z2, m_max, lat0.l_min, lat1.l_max);
    cd dot = 0.0;
    double na = 0.0, nb = 0.0;
    for (const auto& [cell, c] : combined) {
      na += std::norm(c);
      const auto it = mm.find(cell);
      if (it != mm.end()) dot += std::conj(c) * it->second;
    }
    for (const auto& [cell, c] : mm) nb += std::norm(c);
    worst = std::min(worst, std::abs(dot) / std::sqrt(na * nb));
    worst_norm = std::max(worst_norm, std::abs(na / std::exp(std::norm(z1) + std::norm(z2)) - 1.0));
  }
  auto res = make_result("C10", "mu=0 two-sector state equals the two-mode coherent state", worst, 1.0 - 1e-8, ">=");
  res.details = {{"min_normalized_overlap", worst}, {"max_norm_rel_error_vs_exp", worst_norm}};
  return res;
}

// 11. Position spread grows near the solenoid
// var_position depends on time; it is averaged over one period of the evolution.
CheckResult near_solenoid_spread(const CheckContext& ctx) {
  constexpr int kSamples = 32;
  const double period = 2.0 * kPi / ctx.units.omega;
  struct Averages {
    double var_position = 0.0, r2 = 0.0;
    coherent::MeanReport first;
  };
  auto averaged = [&](const coherent::CoherentParams& p) {
    Averages a;
    for (int i = 0; i < kSamples; ++i) {
      const auto g = coherent::mean_geometry(coherent::evolve(p, period * i / kSamples, ctx.units), ctx.units);
      if (i == 0) a.first = g;
      a.var_position += g.var_position / kSamples;
      a.r2 += (g.var_position + std::norm(g.position_mean)) / kSamples;
    }
    return a;
  };
  json sectors = json::array();
  bool ok = true;
  double ratio1 = 0.0;
  for (int j : {1, 0}) {
    const auto near = averaged(params(j, 3.0, 3.0, 0.5));
    // far from the solenoid means |z1| > |z2| for j=1 and the mirrored point for j=0
    const auto far = averaged(j == 1 ? params(j, 3.0, 1.0, 0.5) : params(j, 1.0, 3.0, 0.5));
    const double ratio = near.var_position / far.var_position;
    const auto lat = coherent::build_lattice(params(j, 3.0, 3.0, 0.5), 1e-14);
    const double r2_mean = coherent::observable_moments(lat, coherent::Observable::R2, ctx.units).mean.real();
    const double rel_R2 = near.first.var_R2 / (r2_mean * r2_mean);
    const double rel_pos = near.var_position / near.r2;
    if (j == 1) ratio1 = ratio;
    ok = ok && ratio > 2.0 && rel_R2 < rel_pos;
    sectors.push_back({{"j", j},
                       {"var_position_near_avg", near.var_position},
                       {"var_position_far_avg", far.var_position},
                       {"var_position_near_t0", near.first.var_position},
                       {"var_position_far_t0", far.first.var_position},
                       {"ratio", ratio},
                       {"var_R2_over_R2_mean_sq", rel_R2},
                       {"var_position_over_r2_mean", rel_pos}});
  }
  auto res = make_result("C11", "position variance grows near the solenoid", ratio1, 2.0, ">");
  res.passed = ok;
  res.details = {{"sectors", sectors}};
  return res;
}

// 12. i dPhi/dt = omega N1 Phi at sampled points
CheckResult schrodinger_residual(const CheckContext& ctx) {
  std::mt19937_64 rng(ctx.seed + 5);
  std::uniform_real_distribution<double> md(1.0, 2.0), ph(-kPi, kPi), mud(0.0, 0.999), rd(0.05, 6.0),
      td(0.0, 2.0 * kPi);
  const double w = ctx.units.omega;
  const double h = 1e-3 / w;
  double worst = 0.0;
  int n = 0;
  while (n < 50) {
    const int j = n % 2;
    const auto p = params(j, std::polar(md(rng), ph(rng)), std::polar(md(rng), ph(rng)), mud(rng), n % 3 - 1);
    const double t = td(rng) / w;
    const double phi = td(rng);
    const double rho = rd(rng);
    // keep z1(t) away from the negative real axis across the stencil
    const double a = std::arg(p.z1 * std::polar(1.0, -w * t));
    if (std::abs(a) > kPi - 0.1) continue;
    const auto range = coherent::column_range(p);
    auto phi_t = [&](double tt) { return coherent::coherent_phi(coherent::evolve(p, tt, ctx.units), phi, rho, range); };
    const cd dt = (phi_t(t - 2 * h) - 8.0 * phi_t(t - h) + 8.0 * phi_t(t + h) - phi_t(t + 2 * h)) / (12.0 * h);
    const auto q = coherent::evolve(p, t, ctx.units);
    const auto lat = coherent::build_lattice(q, 1e-26);
    cd n1phi = 0.0;
    for (const auto& [cell, c] : lat.coeffs) {
      const auto qn = spectrum::formal_qn(j, cell.m, cell.l, p.mu);
      n1phi += qn.n1 * c * spectrum::eigenfunction(qn, p.l0, phi, rho);
    }
    worst = std::max(worst, std::abs(cd(0.0, 1.0) * dt - w * n1phi));
    ++n;
  }
  auto res = make_result("C12", "coherent states obey i dPhi/dt = omega N1 Phi", worst, 1e-6, "<");
  res.details = {{"samples", n}};
  return res;
}

}  // namespace

CircleFit fit_circle(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(x.size());
  // x^2 + y^2 + D x + E y + F = 0
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = x[i];
    A(i, 1) = y[i];
    A(i, 2) = 1.0;
    b(i) = -(x[i] * x[i] + y[i] * y[i]);
  }
  const Eigen::Vector3d s = A.colPivHouseholderQr().solve(b);
  CircleFit f;
  f.cx = -0.5 * s(0);
  f.cy = -0.5 * s(1);
  f.radius = std::sqrt(f.cx * f.cx + f.cy * f.cy - s(2));
  for (Eigen::Index i = 0; i < n; ++i) {
    f.residual = std::max(f.residual, std::abs(std::hypot(x[i] - f.cx, y[i] - f.cy) - f.radius));
  }
  return f;
}

double angular_frequency(const std::vector<double>& t, const std::vector<double>& x, const std::vector<double>& y,
                         double cx, double cy) {
  const std::size_t n = t.size();
  std::vector<double> th(n);
  for (std::size_t i = 0; i < n; ++i) {
    th[i] = std::atan2(y[i] - cy, x[i] - cx);
    if (i > 0) {
      while (th[i] - th[i - 1] > kPi) th[i] -= 2.0 * kPi;
      while (th[i] - th[i - 1] < -kPi) th[i] += 2.0 * kPi;
    }
  }
  double mt = 0.0, mth = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += t[i];
    mth += th[i];
  }
  mt /= n;
  mth /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (t[i] - mt) * (th[i] - mth);
    sxx += (t[i] - mt) * (t[i] - mt);
  }
  return sxy / sxx;
}

CheckResult run_criterion(int n, const CheckContext& ctx) {
  ctx.units.validate();
  switch (n) {
    case 1:
      return orthonormality(ctx);
    case 2:
      return y_agreement(ctx);
    case 3:
      return q_consistency(ctx);
    case 4:
      return semiclassical_means(ctx);
    case 5:
      return oracle_equivalence(ctx);
    case 6:
      return trajectory_circle(ctx);
    case 7:
      return delta_inequalities(ctx);
    case 8:
      return spectrum_splitting(ctx);
    case 9:
      return sector_indicator(ctx);
    case 10:
      return malkin_manko(ctx);
    case 11:
      return near_solenoid_spread(ctx);
    case 12:
      return schrodinger_residual(ctx);
    default:
      throw DomainError("run_criterion: no criterion " + std::to_string(n));
  }
}

std::vector<CheckResult> run_criteria(const CheckContext& ctx) {
  std::vector<CheckResult> out;
  for (int n = 1; n <= kCriterionCount; ++n) out.push_back(run_criterion(n, ctx));
  return out;
}

json to_json(const CheckResult& r) {
  return {{"id", r.id},
          {"title", r.title},
          {"passed", r.passed},
          {"measured", r.measured},
          {"threshold", r.threshold},
          {"comparison", r.comparison},
          {"details", r.details}};
}

std::string summary_line(const CheckResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "[%s] %-4s %-66s measured=%.6e %s %.3e", r.passed ? "PASS" : "FAIL",
                r.id.c_str(), r.title.c_str(), r.measured, r.comparison.c_str(), r.threshold);
  return buf;
}

}  // namespace msf::harness
