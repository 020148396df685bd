#include "msf/harness/runs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <thread>

#include "msf/classical.hpp"
#include "msf/coherent.hpp"
#include "msf/harness/checks.hpp"
#include "msf/spectrum.hpp"

namespace msf::harness {

namespace fs = std::filesystem;
using cd = std::complex<double>;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const RunConfig& cfg, const std::vector<std::string>& columns)
      : path_(path), out_(path) {
    if (!out_) throw std::runtime_error("cannot write '" + path.string() + "'");
    out_ << "# config_hash=" << config_hash(cfg) << " version=" << kVersion << '\n';
    row_strings(columns);
  }

  void row(const std::vector<double>& values) {
    std::vector<std::string> s;
    s.reserve(values.size());
    for (double v : values) s.push_back(num(v));
    row_strings(s);
  }

  const fs::path& path() const { return path_; }

 private:
  void row_strings(const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) out_ << (i ? "," : "") << v[i];
    out_ << '\n';
  }

  fs::path path_;
  std::ofstream out_;
};

fs::path prepare_dir(const RunConfig& cfg) {
  fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const json& j, RunOutput& out) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << j.dump(2) << '\n';
  out.files.push_back(path.string());
}

json header_json(const RunConfig& cfg) {
  return {{"version", kVersion}, {"config_hash", config_hash(cfg)}, {"scenario", scenario_name(cfg.scenario)}};
}

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

coherent::CoherentParams coherent_params(const RunConfig& cfg) {
  coherent::CoherentParams p;
  p.j = cfg.coherent.j;
  p.z1 = cfg.coherent.z1;
  p.z2 = cfg.coherent.z2;
  p.mu = cfg.flux.mu;
  p.l0 = cfg.flux.l0;
  return p;
}

// Minimal static SVG: polylines and short segments in a padded box.
class SvgPlot {
 public:
  void polyline(const std::vector<double>& x, const std::vector<double>& y, const std::string& color) {
    lines_.push_back({x, y, color, false});
    extend(x, y);
  }
  void segments(const std::vector<double>& x, const std::vector<double>& y, double half_width,
                const std::string& color) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < x.size(); ++i) {
      xs.insert(xs.end(), {x[i] - half_width, x[i] + half_width});
      ys.insert(ys.end(), {y[i], y[i]});
    }
    lines_.push_back({xs, ys, color, true});
    extend(xs, ys);
  }
  void write(const fs::path& path, const std::string& title, bool equal_aspect) const {
    const double W = 640, H = 480, pad = 40;
    double sx = (W - 2 * pad) / std::max(xmax_ - xmin_, 1e-12);
    double sy = (H - 2 * pad) / std::max(ymax_ - ymin_, 1e-12);
    if (equal_aspect) sx = sy = std::min(sx, sy);
    auto X = [&](double x) { return pad + (x - xmin_) * sx; };
    auto Y = [&](double y) { return H - pad - (y - ymin_) * sy; };
    std::ofstream f(path);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    f << "<text x=\"" << pad << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    for (const auto& l : lines_) {
      if (l.pairs) {
        for (std::size_t i = 0; i + 1 < l.x.size(); i += 2) {
          f << "<line x1=\"" << num(X(l.x[i])) << "\" y1=\"" << num(Y(l.y[i])) << "\" x2=\"" << num(X(l.x[i + 1]))
            << "\" y2=\"" << num(Y(l.y[i + 1])) << "\" stroke=\"" << l.color << "\" stroke-width=\"2\"/>\n";
        }
      } else {
        f << "<polyline fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < l.x.size(); ++i) f << num(X(l.x[i])) << ',' << num(Y(l.y[i])) << ' ';
        f << "\"/>\n";
      }
    }
    f << "</svg>\n";
  }

 private:
  struct Line {
    std::vector<double> x, y;
    std::string color;
    bool pairs;
  };
  void extend(const std::vector<double>& x, const std::vector<double>& y) {
    for (double v : x) xmin_ = std::min(xmin_, v), xmax_ = std::max(xmax_, v);
    for (double v : y) ymin_ = std::min(ymin_, v), ymax_ = std::max(ymax_, v);
  }
  std::vector<Line> lines_;
  double xmin_ = 1e300, xmax_ = -1e300, ymin_ = 1e300, ymax_ = -1e300;
};

}  // namespace

RunOutput run_spectrum(const RunConfig& cfg) {
  RunOutput out;
  const auto dir = prepare_dir(cfg);
  const auto& s = cfg.spectrum;
  const auto levels = spectrum::level_diagram(cfg.flux.mu, s.m_max, s.l_min, s.l_max, cfg.flux.l0);
  {
    CsvWriter w(dir / "levels.csv", cfg, {"j", "m", "l", "mu", "energy_hw", "lz_hbar"});
    for (const auto& e : levels) w.row({double(e.qn.j), double(e.qn.m), double(e.qn.l), e.qn.mu, e.energy, e.lz});
    out.files.push_back(w.path().string());
  }
  {
    // levels against l; landau_hw is the level without flux, shift_hw the displacement
    CsvWriter w(dir / "splitting.csv", cfg, {"l", "energy_hw", "j", "landau_hw", "shift_hw"});
    for (const auto& e : levels) {
      const double landau = e.qn.j == 1 ? e.qn.m + e.qn.l + 0.5 : e.qn.m + 0.5;
      w.row({double(e.qn.l), e.energy, double(e.qn.j), landau, e.energy - landau});
    }
    out.files.push_back(w.path().string());
  }
  if (cfg.svg && !levels.empty()) {
    SvgPlot plot;
    std::vector<double> x0, y0, x1, y1;
    for (const auto& e : levels) {
      (e.qn.j == 0 ? x0 : x1).push_back(e.qn.l);
      (e.qn.j == 0 ? y0 : y1).push_back(e.energy);
    }
    if (!x0.empty()) plot.segments(x0, y0, 0.35, "#1f77b4");
    if (!x1.empty()) plot.segments(x1, y1, 0.35, "#d62728");
    plot.write(dir / "levels.svg", "energy (hbar omega) against l", false);
    out.files.push_back((dir / "levels.svg").string());
  }
  out.report = header_json(cfg);
  out.report["levels"] = levels.size();
  return out;
}

RunOutput run_classical(const RunConfig& cfg) {
  RunOutput out;
  const auto dir = prepare_dir(cfg);
  const auto& c = cfg.classical;
  classical::ClassicalOrbit o;
  o.R = c.R;
  o.Rc = c.Rc;
  o.psi0 = c.psi0;
  o.alpha_c = c.alpha_c;
  o.pz = c.pz;
  o.z0 = c.z0;
  const double period = 2.0 * kPi / cfg.units.omega;
  {
    CsvWriter w(dir / "orbit.csv", cfg, {"t", "x", "y", "z", "Px", "Py", "r", "lz"});
    for (int i = 0; i <= c.samples; ++i) {
      const double t = c.periods * period * i / c.samples;
      const auto s = classical::orbit_state(o, cfg.units, t);
      const auto p = classical::canonical_momentum(s, cfg.units, cfg.flux);
      w.row({t, s.x, s.y, s.z, s.Px, s.Py, std::hypot(s.x, s.y), s.x * p.py - s.y * p.px});
    }
    out.files.push_back(w.path().string());
  }
  const auto obs = classical::classical_observables(o, cfg.units, cfg.flux);
  const auto a = classical::classical_a(o, cfg.units, 0.0);
  out.report = header_json(cfg);
  out.report["orbit"] = {{"R", o.R},           {"Rc", o.Rc},           {"center", {o.x0(), o.y0()}},
                         {"r_min", o.r_min()}, {"r_max", o.r_max()},   {"touches_solenoid", o.touches_solenoid()},
                         {"sector", classical::sector_name(classical::classify_orbit(o))}};
  out.report["energy"] = obs.energy;
  out.report["lz"] = obs.lz;
  out.report["a1"] = complex_json(a.a1);
  out.report["a2"] = complex_json(a.a2);
  write_json(dir / "report.json", out.report, out);
  return out;
}

RunOutput run_coherent(const RunConfig& cfg) {
  RunOutput out;
  const auto dir = prepare_dir(cfg);
  const auto p = coherent_params(cfg);
  const auto lat = coherent::build_lattice(p, cfg.tol.lattice);
  const auto g = coherent::mean_geometry(p, cfg.units, cfg.tol.lattice);
  {
    std::ofstream f(dir / "lattice.txt");
    coherent::write_lattice(f, lat);
    out.files.push_back((dir / "lattice.txt").string());
  }
  {
    CsvWriter w(dir / "columns.csv", cfg, {"l", "weight"});
    std::map<int, double> cols;
    for (const auto& [cell, c] : lat.coeffs) cols[cell.l] += std::norm(c);
    const double n = lat.norm_sq();
    for (const auto& [l, v] : cols) w.row({double(l), v / n});
    out.files.push_back(w.path().string());
  }
  const auto [u, v] = p.q_arguments();
  out.report = header_json(cfg);
  out.report["state"] = {{"j", p.j}, {"z1", complex_json(p.z1)}, {"z2", complex_json(p.z2)},
                         {"mu", p.mu}, {"l0", p.l0}};
  if (u > 0.0 && v > 0.0) {
    out.report["log_norm_sq"] = coherent::log_q_fn(p.q_order(), u, v);
    out.report["delta"] = coherent::delta_fn(p.q_order(), u, v);
  } else {
    out.report["log_norm_sq"] = std::log(lat.norm_sq());
  }
  out.report["means"] = {{"n1", g.n1_mean},
                         {"n2", g.n2_mean},
                         {"a1", complex_json(g.a1_mean)},
                         {"a2", complex_json(g.a2_mean)},
                         {"position", complex_json(g.position_mean)},
                         {"R", g.R_mean},
                         {"Rc", g.Rc_mean}};
  out.report["variances"] = {{"R2", g.var_R2}, {"Rc2", g.var_Rc2}, {"position", g.var_position}};
  out.report["lattice"] = {{"cells", lat.coeffs.size()}, {"m_max", lat.m_max}, {"l_min", lat.l_min},
                           {"l_max", lat.l_max},         {"tail_mass", lat.tail_mass}};
  write_json(dir / "report.json", out.report, out);
  return out;
}

RunOutput run_evolve(const RunConfig& cfg) {
  RunOutput out;
  const auto dir = prepare_dir(cfg);
  const auto p = coherent_params(cfg);
  const auto& e = cfg.evolve;
  const auto& units = cfg.units;
  const double period = 2.0 * kPi / units.omega;
  const double len = std::sqrt(units.magnetic_length_sq());
  const auto orbit = classical::orbit_from_a(p.z1, p.z2, units, 0.0, cfg.coherent.pz);

  std::vector<double> ts, xs, ys, var_pos;
  double max_radius_error = 0.0;
  {
    CsvWriter w(dir / "trajectory.csv", cfg,
                {"t", "mean_x", "mean_y", "R_mean", "Rc_mean", "var_position", "var_R2", "var_Rc2", "n1_mean",
                 "n2_mean"});
    CsvWriter c(dir / "classical_overlay.csv", cfg, {"t", "x_classical", "y_classical", "x_mean", "y_mean"});
    for (int i = 0; i < e.samples; ++i) {
      const double t = e.periods * period * i / e.samples;
      const auto g = coherent::mean_geometry(coherent::evolve(p, t, units), units, cfg.tol.lattice);
      w.row({t, g.position_mean.real(), g.position_mean.imag(), g.R_mean, g.Rc_mean, g.var_position, g.var_R2,
             g.var_Rc2, g.n1_mean, g.n2_mean});
      const auto s = classical::orbit_state(orbit, units, t);
      c.row({t, s.x, s.y, g.position_mean.real(), g.position_mean.imag()});
      ts.push_back(t);
      xs.push_back(g.position_mean.real());
      ys.push_back(g.position_mean.imag());
      var_pos.push_back(g.var_position);
      max_radius_error = std::max({max_radius_error, std::abs(g.R_mean - orbit.R) / std::max(orbit.R, 1e-300),
                                   std::abs(g.Rc_mean - orbit.Rc) / std::max(orbit.Rc, 1e-300)});
    }
    out.files.push_back(w.path().string());
    out.files.push_back(c.path().string());
  }
  {
    const double r_max = e.r_max > 0.0 ? e.r_max : len * (std::abs(p.z1) + std::abs(p.z2) + 4.0);
    const auto range = coherent::column_range(p);
    const double norm = coherent::overlap(p, p).real();
    const auto q = coherent::evolve(p, e.spread_t, units);
    CsvWriter w(dir / "spread.csv", cfg, {"r", "phi", "x", "y", "density"});
    for (int a = 0; a < e.grid_r; ++a) {
      const double r = r_max * (a + 0.5) / e.grid_r;
      const double rho = r * r / units.magnetic_length_sq();
      for (int b = 0; b < e.grid_phi; ++b) {
        const double phi = 2.0 * kPi * b / e.grid_phi;
        const double d = std::norm(coherent::coherent_phi(q, phi, rho, range)) / (kPi * len * len * norm);
        w.row({r, phi, r * std::cos(phi), r * std::sin(phi), d});
      }
    }
    out.files.push_back(w.path().string());
  }
  const auto fit = fit_circle(xs, ys);
  out.report = header_json(cfg);
  out.report["circle_fit"] = {{"center", {fit.cx, fit.cy}}, {"radius", fit.radius}, {"residual", fit.residual}};
  out.report["angular_frequency"] = angular_frequency(ts, xs, ys, fit.cx, fit.cy);
  out.report["classical_orbit"] = {{"R", orbit.R}, {"Rc", orbit.Rc}, {"center", {orbit.x0(), orbit.y0()}}};
  out.report["max_radius_rel_error_vs_classical"] = max_radius_error;
  out.report["var_position_range"] = {*std::min_element(var_pos.begin(), var_pos.end()),
                                      *std::max_element(var_pos.begin(), var_pos.end())};
  if (cfg.svg) {
    SvgPlot plot;
    std::vector<double> cx, cy;
    for (int i = 0; i <= 256; ++i) {
      const auto s = classical::orbit_state(orbit, units, period * i / 256.0);
      cx.push_back(s.x);
      cy.push_back(s.y);
    }
    plot.polyline(cx, cy, "#999999");
    auto qx = xs, qy = ys;
    qx.push_back(xs.front());
    qy.push_back(ys.front());
    plot.polyline(qx, qy, "#d62728");
    plot.write(dir / "trajectory.svg", "mean position (red) and classical orbit (grey)", true);
    out.files.push_back((dir / "trajectory.svg").string());
  }
  write_json(dir / "report.json", out.report, out);
  return out;
}

RunOutput run_verify(const RunConfig& cfg) {
  RunOutput out;
  const auto dir = prepare_dir(cfg);
  CheckContext ctx{cfg.units, cfg.seed};
  json criteria = json::array(), invariants = json::array();
  for (const auto& r : run_criteria(ctx)) {
    criteria.push_back(to_json(r));
    out.summary.push_back(summary_line(r));
    out.passed = out.passed && r.passed;
  }
  for (const auto& r : run_invariants(ctx)) {
    invariants.push_back(to_json(r));
    out.summary.push_back(summary_line(r));
    out.passed = out.passed && r.passed;
  }
  out.report = header_json(cfg);
  out.report["seed"] = cfg.seed;
  out.report["criteria"] = criteria;
  out.report["invariants"] = invariants;
  out.report["passed"] = out.passed;
  write_json(dir / "report.json", out.report, out);
  return out;
}

RunOutput run_sweep(const RunConfig& cfg) {
  RunOutput out;
  const auto dir = prepare_dir(cfg);
  struct Point {
    int j;
    double mu, a1, a2;
  };
  auto sorted = [](auto v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  std::vector<Point> points;
  for (int j : sorted(cfg.sweep.sectors)) {
    for (double mu : sorted(cfg.sweep.mu)) {
      for (double a1 : sorted(cfg.sweep.z1_abs)) {
        for (double a2 : sorted(cfg.sweep.z2_abs)) {
          if ((j == 1 && a1 == 0.0 && mu > 0.0) || (j == 0 && a2 == 0.0)) continue;
          points.push_back({j, mu, a1, a2});
        }
      }
    }
  }
  auto evaluate = [&](const Point& pt) {
    coherent::CoherentParams p;
    p.j = pt.j;
    p.z1 = pt.a1;
    p.z2 = pt.a2;
    p.mu = pt.mu;
    p.l0 = cfg.flux.l0;
    const auto g = coherent::mean_geometry(p, cfg.units, cfg.tol.lattice);
    const double len = std::sqrt(cfg.units.magnetic_length_sq());
    const auto [u, v] = p.q_arguments();
    const double delta = (u > 0.0 && v > 0.0) ? coherent::delta_fn(p.q_order(), u, v) : 0.0;
    return std::vector<double>{double(pt.j), pt.mu,      pt.a1,      pt.a2,          g.n1_mean,
                               g.n2_mean,     g.R_mean,   g.Rc_mean,  delta,          g.var_position,
                               g.var_R2,      g.var_Rc2,  len * pt.a1, len * pt.a2};
  };
  // points are independent; rows are written in the sorted point order
  std::vector<std::vector<double>> rows(points.size());
  const std::size_t workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  for (std::size_t start = 0; start < points.size(); start += workers) {
    std::vector<std::future<std::vector<double>>> jobs;
    for (std::size_t i = start; i < std::min(points.size(), start + workers); ++i) {
      jobs.push_back(std::async(std::launch::async, evaluate, points[i]));
    }
    for (std::size_t k = 0; k < jobs.size(); ++k) rows[start + k] = jobs[k].get();
  }
  {
    CsvWriter w(dir / "sweep.csv", cfg,
                {"j", "mu", "z1_abs", "z2_abs", "n1_mean", "n2_mean", "R_mean", "Rc_mean", "delta", "var_position",
                 "var_R2", "var_Rc2", "R_classical", "Rc_classical"});
    for (const auto& r : rows) w.row(r);
    out.files.push_back(w.path().string());
  }
  out.report = header_json(cfg);
  out.report["points"] = points.size();
  return out;
}

RunOutput run_scenario(const RunConfig& cfg) {
  cfg.validate();
  switch (cfg.scenario) {
    case Scenario::spectrum:
      return run_spectrum(cfg);
    case Scenario::classical:
      return run_classical(cfg);
    case Scenario::coherent:
      return run_coherent(cfg);
    case Scenario::evolve:
      return run_evolve(cfg);
    case Scenario::verify:
      return run_verify(cfg);
    case Scenario::sweep:
      return run_sweep(cfg);
  }
  return {};
}

}  // namespace msf::harness
