#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "exact_solver.hpp"
#include "nearfield.hpp"
#include "fem1d/mesh.hpp"
#include "parallel.hpp"
#include "pressure_solver.hpp"
#include "sources.hpp"

namespace viscac {

struct Discretization {
  int degree = 12;
  int modes = 64;         // truncation K, modes -K..K
  int n_interior = 16;
  double ratio = 0.2;
  int layers = -1;        // -1: choose so the wall element is <= layer_fraction * epsilon
  double layer_fraction = 0.5;
  double mode_energy_floor = 1e-24;  // modes below this share of the source energy are skipped

  void validate() const {
    if (degree < 1) throw std::invalid_argument("degree must be >= 1");
    if (modes < 0) throw std::invalid_argument("modes must be >= 0");
    if (n_interior < 2) throw std::invalid_argument("n_interior must be >= 2");
    if (!(ratio > 0 && ratio < 1)) throw std::invalid_argument("ratio must lie in (0,1)");
    if (!(layer_fraction > 0)) throw std::invalid_argument("layer_fraction must be > 0");
  }
};

inline fem1d::Mesh1D make_mesh(const SeparableGeometry& g, const MaterialParams& p, const Discretization& d) {
  const int layers = d.layers >= 0 ? d.layers
                                   : fem1d::layers_for(g.width(), d.n_interior, d.ratio,
                                                       d.layer_fraction * epsilon(p));
  return fem1d::build_graded_mesh(g.lower(), g.upper(), d.n_interior, d.ratio, layers);
}

// Modes whose source share is above the floor; the rest produce solutions
// far below any reported error and are skipped.
inline std::vector<const ModalSource*> active_modes(const ModalSourceSet& set, double floor) {
  std::vector<const ModalSource*> out;
  for (const auto& m : set.modes)
    if (m.energy > floor * set.energy) out.push_back(&m);
  return out;
}

struct OrderResult {
  ModellingError err;
  std::string status = "ok";
  bool ok() const { return status == "ok"; }
};

struct SampleResult {
  MaterialParams params;
  std::array<OrderResult, 3> orders;
  std::vector<std::string> warnings;
};

// Exact solve plus the requested pressure models for every active mode;
// the far-field velocity comes from the pressure identity.
inline SampleResult run_sample(const MaterialParams& params, const SeparableGeometry& g,
                               const ModalSourceSet& src, const Discretization& disc,
                               const AnalysisRegion& region, const std::vector<int>& orders, int jobs = 1) {
  const auto mesh = make_mesh(g, params, disc);
  const RegionQuadrature rq(g, region, mesh, disc.degree + 4);
  const auto modes = active_modes(src, disc.mode_energy_floor);

  struct ModeOut {
    ModeNorms ref;
    std::array<ModeNorms, 3> err{};
    std::array<std::string, 3> status{"ok", "ok", "ok"};
    std::vector<std::string> warnings;
  };
  std::vector<ModeOut> out(modes.size());
  parallel_for(int(modes.size()), jobs, [&](int i) {
    const auto& ms = *modes[i];
    const auto ex = solve_exact_mode(params, g, ms, mesh, disc.degree);
    out[i].warnings = ex.warnings;
    const auto se = sample_on(ex, rq);
    out[i].ref = mode_norms(g, ms.k, rq, se);
    for (int N : orders) {
      try {
        const auto ps = solve_pressure_mode(params, g, ModelOrder(N), ms, mesh, disc.degree);
        const auto sa = sample_on(velocity_from_pressure(ps), rq);
        out[i].err[N] = mode_error_norms(g, ms.k, rq, se, sa);
      } catch (const fem1d::SingularSystemError& e) {
        out[i].status[N] = "singular";
      }
    }
  });

  SampleResult r;
  r.params = params;
  std::array<ErrorAccumulator, 3> acc;
  for (const auto& m : out) {
    for (int N : orders) {
      acc[N].add(m.ref, m.err[N]);
      if (m.status[N] != "ok") r.orders[N].status = m.status[N];
    }
    for (const auto& w : m.warnings)
      if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end()) r.warnings.push_back(w);
  }
  for (int N : orders)
    if (r.orders[N].ok()) r.orders[N].err = acc[N].result(g.tangential_measure());
  return r;
}

struct SweepPoint {
  double eta = 0, omega = 0;
  SampleResult result;
};

struct SweepReport {
  std::vector<SweepPoint> points;
  std::vector<int> orders;
  std::array<SlopeFit, 3> slopes{};  // combined error against sqrt(eta); eta sweeps only
};

using Progress = std::function<void(const SweepPoint&)>;

// Samples run one after another; the modes inside each sample are spread
// over `jobs` threads. Failed solves are recorded and the sweep continues.
inline SweepReport run_eta_sweep(MaterialParams base, const std::vector<double>& etas, const SeparableGeometry& g,
                                 const ModalSourceSet& src, const Discretization& disc,
                                 const AnalysisRegion& region, const std::vector<int>& orders, int jobs,
                                 const Progress& progress = {}) {
  SweepReport rep;
  rep.orders = orders;
  for (double eta : etas) {
    MaterialParams p = base;
    p.eta = eta;
    SweepPoint pt{eta, p.omega, run_sample(p, g, src, disc, region, orders, jobs)};
    if (progress) progress(pt);
    rep.points.push_back(std::move(pt));
  }
  for (int N : orders) {
    std::vector<double> x, y;
    for (const auto& pt : rep.points) {
      x.push_back(std::sqrt(pt.eta));
      const auto& o = pt.result.orders[N];
      y.push_back(o.ok() ? o.err.total() : std::numeric_limits<double>::quiet_NaN());
    }
    if (x.size() >= 3) rep.slopes[N] = fit_slope_auto(x, y);
  }
  return rep;
}

// Uniform grid on [min, max]; points closer than min_distance to an
// eigenfrequency of the unit strip torus are dropped.
inline std::vector<double> omega_samples(double lo, double hi, int count, double min_distance, double c = 1.0) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const double w = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    if (distance_to_resonance(w, c) >= min_distance) out.push_back(w);
  }
  return out;
}

inline SweepReport run_omega_sweep(MaterialParams base, const std::vector<double>& omegas,
                                   const SeparableGeometry& g, const ModalSourceSet& src,
                                   const Discretization& disc, const AnalysisRegion& region,
                                   const std::vector<int>& orders, int jobs, const Progress& progress = {}) {
  SweepReport rep;
  rep.orders = orders;
  for (double w : omegas) {
    MaterialParams p = base;
    p.omega = w;
    SweepPoint pt{p.eta, w, run_sample(p, g, src, disc, region, orders, jobs)};
    if (progress) progress(pt);
    rep.points.push_back(std::move(pt));
  }
  return rep;
}

// Near-wall defect of the composite field far + corrector against the exact
// solution: sup over s in [0, s_max] of the tangential error, taken in l2
// over the modes (the Parseval norm along the wall), relative to the l2 norm
// of the far-field wall slip.
struct NoSlipDefect {
  double defect = 0;    // relative composite defect
  double far_slip = 0;  // l2 norm of the far-field wall trace
};

inline NoSlipDefect no_slip_defect(const MaterialParams& p, const SeparableGeometry& g, const ModalSourceSet& src,
                                   const Discretization& disc, int order, Wall wall, double s_max,
                                   ProfileForm form = ProfileForm::TraceMatched, int samples = 400,
                                   int jobs = 1) {
  const auto mesh = make_mesh(g, p, disc);
  const auto modes = active_modes(src, disc.mode_energy_floor);
  const auto cut = default_cutoff(g);
  const double yw = g.boundary(wall).coord;
  std::vector<std::vector<double>> err(modes.size(), std::vector<double>(samples + 1));
  std::vector<double> slip(modes.size());
  parallel_for(int(modes.size()), jobs, [&](int i) {
    const auto& ms = *modes[i];
    const auto ex = solve_exact_mode(p, g, ms, mesh, disc.degree);
    const auto far = velocity_from_pressure(solve_pressure_mode(p, g, ModelOrder(order), ms, mesh, disc.degree));
    const auto bl = build_phi(order, wall_trace(g, wall, far.velocity(yw)), g, wall, ms.k, p, cut, form);
    slip[i] = std::norm(bl.trace);
    for (int j = 0; j <= samples; ++j) {
      const double y = g.coord_from_distance(wall, s_max * j / samples);
      err[i][j] = std::norm(far.velocity(y).t + eval_corrector(bl, y).t - ex.velocity(y).t);
    }
  });
  NoSlipDefect r;
  double s2 = 0;
  for (double v : slip) s2 += v;
  r.far_slip = std::sqrt(s2);
  if (!(s2 > 0)) throw std::runtime_error("far-field wall slip vanishes; defect is undefined");
  for (int j = 0; j <= samples; ++j) {
    double e2 = 0;
    for (const auto& e : err) e2 += e[j];
    r.defect = std::max(r.defect, std::sqrt(e2 / s2));
  }
  return r;
}

}  // namespace viscac
