#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "csv.hpp"
#include "sweep.hpp"
#include "velocity_solver.hpp"

namespace viscac {

enum ExitCode { Ok = 0, ValidationFailure = 1, SolverFailure = 2 };

struct Failure {
  std::string what;  // "exact", "order 1", ...
  std::string kind;  // singular, error
  std::string message;
};

namespace detail {

inline std::string out_path(const RunConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  return (std::filesystem::path(c.out_dir) / name).string();
}

inline void write_failures(const RunConfig& c, const std::string& command, const std::vector<Failure>& fs) {
  nlohmann::json j;
  j["command"] = command;
  j["config_hash"] = c.hash;
  j["version"] = version;
  j["failures"] = nlohmann::json::array();
  for (const auto& f : fs) j["failures"].push_back({{"what", f.what}, {"kind", f.kind}, {"message", f.message}});
  std::ofstream(out_path(c, "failure.json")) << j.dump(2) << "\n";
}

inline ModalSourceSet project(const RunConfig& c, std::ostream& log) {
  ModalSourceSet set;
  try {
    set = project_to_modes(c.source, c.geometry, c.disc.modes);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("source: ") + e.what());
  }
  for (const auto& w : set.warnings) log << "warning: " << w << "\n";
  return set;
}

inline double phase_coordinate(const SeparableGeometry& g, int k) {
  return g.is_annulus() ? double(k) : g.wavenumber(k);
}

// Samples of every mode on the y grid, summed with phases over the t grid.
struct FieldGrid {
  std::vector<double> t, y;
  std::vector<FieldSample> v;  // row major, t fastest

  FieldGrid(const SeparableGeometry& g, int nx, int ny) {
    const double T = g.tangential_measure();
    for (int i = 0; i < nx; ++i) t.push_back(T * i / nx);
    for (int j = 0; j < ny; ++j) y.push_back(g.lower() + g.width() * j / (ny - 1));
    v.resize(t.size() * y.size());
  }

  template <class Solution>
  void add_mode(const SeparableGeometry& g, int k, const Solution& s) {
    const double xi = phase_coordinate(g, k);
    for (std::size_t j = 0; j < y.size(); ++j) {
      const auto f = s.sample(y[j]);
      for (std::size_t i = 0; i < t.size(); ++i) {
        const cplx ph = std::exp(I * xi * t[i]);
        auto& o = v[j * t.size() + i];
        o.p += f.p * ph;
        o.vt += f.vt * ph;
        o.vn += f.vn * ph;
      }
    }
  }

  void write(const std::string& path, const RunConfig& c) const {
    CsvWriter w(path, {"t", "y", "p_re", "p_im", "vt_re", "vt_im", "vn_re", "vn_im"}, c.hash, version);
    for (std::size_t j = 0; j < y.size(); ++j)
      for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& o = v[j * t.size() + i];
        w.row({fmt_num(t[i]), fmt_num(y[j]), fmt_num(o.p.real()), fmt_num(o.p.imag()), fmt_num(o.vt.real()),
               fmt_num(o.vt.imag()), fmt_num(o.vn.real()), fmt_num(o.vn.imag())});
      }
  }
};

inline std::string cell(const OrderResult& r, double v) { return r.ok() ? fmt_num(v) : std::string(); }

inline void write_errors(const RunConfig& c, const SweepReport& rep) {
  CsvWriter w(out_path(c, "errors.csv"),
              {"eta", "sqrt_eta", "omega", "order", "err_p_H1", "err_v_Hdiv", "err_total", "abs_p_H1",
               "abs_v_Hdiv", "status"},
              c.hash, version);
  for (const auto& pt : rep.points)
    for (int N : rep.orders) {
      const auto& o = pt.result.orders[N];
      w.row({fmt_num(pt.eta), fmt_num(std::sqrt(pt.eta)), fmt_num(pt.omega), std::to_string(N),
             cell(o, o.err.rel_p), cell(o, o.err.rel_v), cell(o, o.err.total()), cell(o, o.err.abs_p),
             cell(o, o.err.abs_v), o.status});
    }
}

inline void log_point(std::ostream& log, const SweepPoint& pt, const std::vector<int>& orders) {
  log << "eta " << pt.eta << " omega " << pt.omega << ":";
  for (int N : orders) {
    const auto& o = pt.result.orders[N];
    log << "  N" << N << " ";
    if (o.ok()) log << o.err.total();
    else log << o.status;
  }
  log << "\n";
  for (const auto& w : pt.result.warnings) log << "  warning: " << w << "\n";
}

}  // namespace detail

// Exact and approximative fields on a tensor grid plus a per-order summary.
// Orders that fail are recorded in failure.json; the others are still
// written and the exit code is SolverFailure.
inline int cmd_solve(const RunConfig& c, std::ostream& log) {
  const auto& g = c.geometry;
  const auto& p = c.material;
  const auto src = detail::project(c, log);
  const auto mesh = make_mesh(g, p, c.disc);
  const RegionQuadrature rq(g, c.region, mesh, c.disc.degree + 4);
  const auto modes = active_modes(src, c.disc.mode_energy_floor);
  log << modes.size() << " active modes, " << mesh.n_elements() << " elements, eps " << epsilon(p) << "\n";

  std::vector<ModalExactSolution> exact(modes.size());
  parallel_for(int(modes.size()), c.jobs, [&](int i) {
    exact[i] = solve_exact_mode(p, g, *modes[i], mesh, c.disc.degree);
  });
  for (const auto& w : exact.empty() ? std::vector<std::string>{} : exact.front().warnings)
    log << "warning: " << w << "\n";
  detail::FieldGrid ex(g, c.solve.nx, c.solve.ny);
  std::vector<std::vector<FieldSample>> ref(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    ex.add_mode(g, modes[i]->k, exact[i]);
    ref[i] = sample_on(exact[i], rq);
  }
  ex.write(detail::out_path(c, "field_exact.csv"), c);

  std::vector<Failure> failures;
  CsvWriter summary(detail::out_path(c, "summary.csv"),
                    {"order", "route", "status", "err_p_H1", "err_v_Hdiv", "err_total", "min_pivot"}, c.hash,
                    version);
  for (int N : c.orders) {
    detail::FieldGrid fg(g, c.solve.nx, c.solve.ny);
    std::vector<ModeNorms> errs(modes.size());
    std::vector<double> pivots(modes.size());
    OrderResult res;
    try {
      if (c.solve.route == "pressure") {
        std::vector<PressureRouteVelocity> sols(modes.size());
        parallel_for(int(modes.size()), c.jobs, [&](int i) {
          sols[i] = velocity_from_pressure(solve_pressure_mode(p, g, ModelOrder(N), *modes[i], mesh, c.disc.degree));
          errs[i] = mode_error_norms(g, modes[i]->k, rq, ref[i], sample_on(sols[i], rq));
          pivots[i] = sols[i].sol.info.min_pivot;
        });
        for (std::size_t i = 0; i < modes.size(); ++i) fg.add_mode(g, modes[i]->k, sols[i]);
      } else {
        std::vector<MixedModalSolution> sols(modes.size());
        parallel_for(int(modes.size()), c.jobs, [&](int i) {
          sols[i] = solve_velocity_mode(p, g, ModelOrder(N), *modes[i], mesh, c.disc.degree);
          errs[i] = mode_error_norms(g, modes[i]->k, rq, ref[i], sample_on(sols[i], rq));
          pivots[i] = sols[i].info.min_pivot;
        });
        for (std::size_t i = 0; i < modes.size(); ++i) fg.add_mode(g, modes[i]->k, sols[i]);
      }
      ErrorAccumulator acc;
      for (std::size_t i = 0; i < modes.size(); ++i) acc.add(mode_norms(g, modes[i]->k, rq, ref[i]), errs[i]);
      res.err = acc.result(g.tangential_measure());
    } catch (const fem1d::SingularSystemError& e) {
      res.status = "singular";
      failures.push_back({"order " + std::to_string(N), "singular", e.what()});
    }
    double piv = std::numeric_limits<double>::quiet_NaN();
    if (res.ok()) {
      piv = *std::min_element(pivots.begin(), pivots.end());
      fg.write(detail::out_path(c, "field_order" + std::to_string(N) + ".csv"), c);
      log << "order " << N << ": combined relative error " << res.err.total() << "\n";
    } else {
      log << "order " << N << ": " << res.status << "\n";
    }
    summary.row({std::to_string(N), c.solve.route, res.status, detail::cell(res, res.err.rel_p),
                 detail::cell(res, res.err.rel_v), detail::cell(res, res.err.total()), fmt_num(piv)});
  }
  if (!failures.empty()) {
    detail::write_failures(c, "solve", failures);
    return SolverFailure;
  }
  return Ok;
}

inline int cmd_converge(const RunConfig& c, std::ostream& log) {
  const auto src = detail::project(c, log);
  const auto rep = run_eta_sweep(c.material, c.eta_sweep, c.geometry, src, c.disc, c.region, c.orders, c.jobs,
                                 [&](const SweepPoint& pt) { detail::log_point(log, pt, c.orders); });
  detail::write_errors(c, rep);
  CsvWriter w(detail::out_path(c, "slopes.csv"),
              {"order", "slope", "window_first_sqrt_eta", "window_last_sqrt_eta", "stable", "n_samples"}, c.hash,
              version);
  for (int N : c.orders) {
    const auto& s = rep.slopes[N];
    const bool has = s.first >= 0;
    w.row({std::to_string(N), has ? fmt_num(s.slope) : "",
           has ? fmt_num(std::sqrt(rep.points[s.first].eta)) : "",
           has ? fmt_num(std::sqrt(rep.points[s.last].eta)) : "", s.stable ? "1" : "0",
           std::to_string(has ? s.last - s.first + 1 : 0)});
    if (has) log << "order " << N << ": slope " << s.slope << (s.stable ? "" : " (unstable window)") << "\n";
  }
  return Ok;
}

inline int cmd_sweep_omega(const RunConfig& c, std::ostream& log) {
  const auto src = detail::project(c, log);
  const auto& o = c.omega_sweep;
  const auto omegas = omega_samples(o.min, o.max, o.count, o.min_resonance_distance, c.material.c);
  if (int(omegas.size()) < o.count)
    log << (o.count - int(omegas.size())) << " frequencies dropped near eigenfrequencies\n";
  const auto rep = run_omega_sweep(c.material, omegas, c.geometry, src, c.disc, c.region, c.orders, c.jobs,
                                   [&](const SweepPoint& pt) { detail::log_point(log, pt, c.orders); });
  detail::write_errors(c, rep);
  return Ok;
}

// Side view of the tangential velocity at one tangential coordinate: exact,
// far field, corrector and their sum against the wall distance s.
inline int cmd_nearfield(const RunConfig& c, std::ostream& log) {
  const auto& g = c.geometry;
  const auto& p = c.material;
  const auto& nf = c.nearfield;
  const double T = g.tangential_measure();
  if (!(nf.slice >= 0 && nf.slice < T))
    throw ConfigError("nearfield.slice: outside the domain [0, " + std::to_string(T) + ")");
  if (const auto* gs = std::get_if<GaussianGradient>(&c.source); gs && !g.is_annulus() && !nf.force) {
    double d = std::fmod(std::abs(nf.slice - gs->x0), T);
    d = std::min(d, T - d);
    if (d < 3 * std::sqrt(gs->width))
      throw ConfigError("nearfield.slice: passes through the source; set nearfield.force to override");
  }
  const double eps = epsilon(p);
  if (eps > g.width() / 4)
    log << "warning: epsilon " << eps << " exceeds a quarter of the domain width; the wall layers overlap\n";
  const auto cut = default_cutoff(g);
  const double extent = nf.extent > 0 ? std::min(nf.extent, g.width()) : cut.s0;
  const auto src = detail::project(c, log);
  const auto mesh = make_mesh(g, p, c.disc);
  const auto modes = active_modes(src, c.disc.mode_energy_floor);
  const double yw = g.boundary(nf.wall).coord;
  const int n = nf.points;

  std::vector<ModalExactSolution> exact(modes.size());
  parallel_for(int(modes.size()), c.jobs, [&](int i) {
    exact[i] = solve_exact_mode(p, g, *modes[i], mesh, c.disc.degree);
  });
  std::vector<cplx> vex(n + 1);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const cplx ph = std::exp(I * detail::phase_coordinate(g, modes[i]->k) * nf.slice);
    for (int j = 0; j <= n; ++j) vex[j] += exact[i].velocity(g.coord_from_distance(nf.wall, extent * j / n)).t * ph;
  }

  CsvWriter w(detail::out_path(c, "profile.csv"),
              {"order", "s", "y", "exact_re", "exact_im", "far_re", "far_im", "near_re", "near_im", "sum_re",
               "sum_im"},
              c.hash, version);
  std::vector<Failure> failures;
  for (int N : c.orders) {
    std::vector<cplx> far(n + 1), near(n + 1);
    try {
      std::vector<std::vector<std::array<cplx, 2>>> per(modes.size());
      parallel_for(int(modes.size()), c.jobs, [&](int i) {
        const auto& ms = *modes[i];
        const auto fv = velocity_from_pressure(solve_pressure_mode(p, g, ModelOrder(N), ms, mesh, c.disc.degree));
        const auto bl = build_phi(N, wall_trace(g, nf.wall, fv.velocity(yw)), g, nf.wall, ms.k, p, cut, nf.form);
        per[i].resize(n + 1);
        for (int j = 0; j <= n; ++j) {
          const double y = g.coord_from_distance(nf.wall, extent * j / n);
          per[i][j] = {fv.velocity(y).t, eval_corrector(bl, y).t};
        }
      });
      for (std::size_t i = 0; i < modes.size(); ++i) {
        const cplx ph = std::exp(I * detail::phase_coordinate(g, modes[i]->k) * nf.slice);
        for (int j = 0; j <= n; ++j) far[j] += per[i][j][0] * ph, near[j] += per[i][j][1] * ph;
      }
    } catch (const fem1d::SingularSystemError& e) {
      failures.push_back({"order " + std::to_string(N), "singular", e.what()});
      log << "order " << N << ": singular\n";
      continue;
    }
    for (int j = 0; j <= n; ++j) {
      const double s = extent * j / n;
      const cplx sum = far[j] + near[j];
      w.row({std::to_string(N), fmt_num(s), fmt_num(g.coord_from_distance(nf.wall, s)), fmt_num(vex[j].real()),
             fmt_num(vex[j].imag()), fmt_num(far[j].real()), fmt_num(far[j].imag()), fmt_num(near[j].real()),
             fmt_num(near[j].imag()), fmt_num(sum.real()), fmt_num(sum.imag())});
    }
  }
  if (!failures.empty()) {
    detail::write_failures(c, "nearfield", failures);
    return SolverFailure;
  }
  return Ok;
}

}  // namespace viscac
