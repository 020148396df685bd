#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "msf/classical.hpp"
#include "msf/errors.hpp"

using namespace msf;
using namespace msf::classical;

TEST_CASE("flux decomposition") {
  const auto f = FluxConfig::from_flux(2.3);
  CHECK(f.l0 == 2);
  CHECK(f.mu == doctest::Approx(0.3).epsilon(1e-14));
  CHECK_NOTHROW(f.validate());
  const auto g = FluxConfig::from_flux(-0.25);
  CHECK(g.l0 == -1);
  CHECK(g.mu == doctest::Approx(0.75));
  CHECK_THROWS_AS(FluxConfig::from_parts(0, 1.2), DomainError);
  CHECK_THROWS_AS(FluxConfig::from_parts(0, -0.1), DomainError);
  CHECK_THROWS_AS((Units{1.0, 0.0, 1.0}.validate()), DomainError);
  CHECK(Units{}.magnetic_length_sq() == 2.0);
}

TEST_CASE("orbit_state: direct substitution and degenerate touch") {
  const Units u{};
  ClassicalOrbit o{2.0, 3.0, 0.0, 0.0, 0.0, 0.0};
  auto s = orbit_state(o, u, 0.0);
  CHECK(s.x == doctest::Approx(5.0));
  CHECK(s.y == doctest::Approx(0.0));
  CHECK(s.Px == doctest::Approx(0.0));
  CHECK(s.Py == doctest::Approx(2.0));

  ClassicalOrbit touch{1.0, 1.0, std::numbers::pi, 0.0, 0.0, 0.0};
  s = orbit_state(touch, u, 0.0);
  CHECK(std::abs(s.x) < 1e-15);
  CHECK(std::abs(s.y) < 1e-15);
  CHECK(touch.touches_solenoid());

  const Units w{1.3, 0.7, 2.1};
  ClassicalOrbit g{1.4, 0.6, 0.3, 1.1, 0.5, -0.2};
  for (double t : {0.0, 0.7, 3.9, 11.2}) {
    s = orbit_state(g, w, t);
    const double dx = s.x - g.x0();
    const double dy = s.y - g.y0();
    CHECK(dx * dx + dy * dy == doctest::Approx(g.R * g.R).epsilon(1e-14));
    CHECK(s.z == doctest::Approx(g.pz / w.mass * t + g.z0));
  }
}

TEST_CASE("classical_observables: closed forms and canonical angular momentum") {
  const Units u{};
  const auto flux = FluxConfig::from_flux(2.3);
  ClassicalOrbit o{3.0, 1.0, 0.4, 0.9, 0.0, 0.0};
  const auto obs = classical_observables(o, u, flux);
  CHECK(obs.energy == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(obs.lz == doctest::Approx(1.7).epsilon(1e-14));
  // L_z = x p_y - y p_x from the canonical momentum along the orbit
  for (double t : {0.0, 0.37, 1.9, 4.4, 6.0}) {
    const auto s = orbit_state(o, u, t);
    const auto p = canonical_momentum(s, u, flux);
    CHECK(s.x * p.py - s.y * p.px == doctest::Approx(1.7).epsilon(1e-12));
  }
  ClassicalOrbit zero{0.0, 2.0, 0.0, 0.0, 0.0, 0.0};
  const auto z = classical_observables(zero, u, flux);
  CHECK(z.energy == 0.0);
  CHECK(z.lz == doctest::Approx(-2.0 - 2.3));
  ClassicalOrbit equal{1.5, 1.5, 0.0, 0.0, 0.0, 0.0};
  CHECK(classical_observables(equal, u, flux).lz == doctest::Approx(-2.3));
}

TEST_CASE("classical_a: both paths agree") {
  const Units u{};
  ClassicalOrbit o{2.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  auto a = classical_a(o, u, 0.0);
  CHECK(std::abs(a.a1 - std::complex<double>(-std::sqrt(2.0), 0.0)) < 1e-15);
  CHECK(a.a2 == 0.0);
  ClassicalOrbit r0{0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(classical_a(r0, u, 2.0).a1 == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, 4.0);
  const Units w{0.8, 1.7, 2.5};
  for (int i = 0; i < 50; ++i) {
    ClassicalOrbit g{d(rng), d(rng), d(rng), d(rng), 0.0, 0.0};
    const double t = d(rng);
    const auto direct = classical_a(g, w, t);
    const auto from_state = classical_a(orbit_state(g, w, t), w);
    CHECK(std::abs(direct.a1 - from_state.a1) < 1e-12);
    CHECK(std::abs(direct.a2 - from_state.a2) < 1e-12);
    const auto back = orbit_from_a(direct.a1, direct.a2, w, t);
    CHECK(back.R == doctest::Approx(g.R).epsilon(1e-13));
    CHECK(back.Rc == doctest::Approx(g.Rc).epsilon(1e-13));
    const auto again = classical_a(back, w, t);
    CHECK(std::abs(again.a1 - direct.a1) < 1e-12);
    CHECK(std::abs(again.a2 - direct.a2) < 1e-12);
  }
}

TEST_CASE("conservation and dictionary along sampled orbits") {
  const Units u{1.2, 0.9, 1.6};
  const auto flux = FluxConfig::from_flux(-1.35);
  ClassicalOrbit o{1.3, 2.2, 0.7, -0.4, 0.3, 0.1};
  const auto ref_obs = classical_observables(o, u, flux);
  const auto ref_a = classical_a(o, u, 0.0);
  const double ls = u.magnetic_length_sq();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> td(-50.0, 50.0);
  double rmin = 1e300;
  double rmax = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = td(rng);
    const auto s = orbit_state(o, u, t);
    const auto a = classical_a(s, u);
    const double psi = u.omega * t + o.psi0;
    CHECK(std::abs(std::abs(a.a1) - std::abs(ref_a.a1)) < 1e-12);
    CHECK(std::abs(a.a2 - ref_a.a2) < 1e-12);
    CHECK(std::abs(a.a1 * std::polar(1.0, psi) - ref_a.a1 * std::polar(1.0, o.psi0)) < 1e-12);
    CHECK(ls * std::norm(a.a1) == doctest::Approx(o.R * o.R).epsilon(1e-12));
    CHECK(ls * std::norm(a.a2) == doctest::Approx(o.Rc * o.Rc).epsilon(1e-12));
    const auto pos = std::sqrt(ls) * (a.a2 - std::conj(a.a1));
    CHECK(std::abs(pos - std::complex<double>(s.x, s.y)) < 1e-12);
    const double energy = 0.5 * (s.Px * s.Px + s.Py * s.Py) / u.mass;
    CHECK(energy == doctest::Approx(ref_obs.energy).epsilon(1e-12));
    CHECK(u.omega * u.hbar * std::norm(a.a1) == doctest::Approx(ref_obs.energy).epsilon(1e-12));
    const double lz = u.hbar * (std::norm(a.a1) - std::norm(a.a2)) - u.hbar * (flux.l0 + flux.mu);
    CHECK(lz == doctest::Approx(ref_obs.lz).epsilon(1e-12));
    const auto p = canonical_momentum(s, u, flux);
    CHECK(s.x * p.py - s.y * p.px == doctest::Approx(ref_obs.lz).epsilon(1e-11));
    const double r2 = s.x * s.x + s.y * s.y;
    CHECK(r2 == doctest::Approx(o.R * o.R + o.Rc * o.Rc + 2.0 * o.R * o.Rc * std::cos(psi - o.alpha_c)).epsilon(1e-12));
  }
  // dense sampling of one period for the radial extremes
  const double period = 2.0 * std::numbers::pi / u.omega;
  const double t_min = (std::numbers::pi + o.alpha_c - o.psi0) / u.omega;
  for (int i = 0; i <= 4000; ++i) {
    const double t = t_min + period * i / 4000.0;
    const auto s = orbit_state(o, u, t);
    const double r = std::hypot(s.x, s.y);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  CHECK(std::abs(rmin - o.r_min()) < 1e-10);
  CHECK(std::abs(rmax - o.r_max()) < 1e-10);
}

TEST_CASE("classify_orbit") {
  CHECK(classify_orbit({3.0, 1.0}) == Sector::j1);
  CHECK(classify_orbit({1.0, 3.0}) == Sector::j0);
  CHECK(classify_orbit({1.0, 1.0}) == Sector::boundary);
  CHECK(classify_orbit({1.0, 1.0 + 1e-9}, 1e-6) == Sector::boundary);
  CHECK(std::string(sector_name(Sector::boundary)) == "boundary");
}
