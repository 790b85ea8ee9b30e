#pragma once
// Property metrics shared by the property test suite and the acceptance run.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <viscac/commands.hpp>
#include <viscac/nearfield.hpp>
#include <viscac/sweep.hpp>
#include <viscac/velocity_solver.hpp>

namespace props {

using namespace viscac;

inline ModalSourceSet gaussian_modes(const SeparableGeometry& g, int K = 64) {
  return project_to_modes(GaussianGradient{}, g, K);
}

// f = grad(G) for the mode k with G(r) a bump inside the annulus.
inline ModalSource annulus_gradient_mode(int k, double r0, double w) {
  return {k,
          [=](double r) {
            const double d = r - r0;
            const double G = std::exp(-d * d / w);
            const double G1 = -2 * d / w * G;
            const double G2 = (-2 / w + 4 * d * d / (w * w)) * G;
            const double G3 = (12 * d / (w * w) - 8 * d * d * d / (w * w * w)) * G;
            const cplx ik = I * double(k);
            return SourceJet{ik * G / r, ik * (G1 / r - G / (r * r)),
                             ik * (G2 / r - 2 * G1 / (r * r) + 2 * G / (r * r * r)), G1, G2, G3};
          },
          0.0};
}

// Largest relative curl of the velocity-route solution over the listed modes
// and orders, for a gradient source. The curl is normalized by the size of
// the terms that make it up.
inline double curl_freeness() {
  double worst = 0;
  auto check = [&](const SeparableGeometry& g, const MaterialParams& p, const ModalSource& ms) {
    const auto mesh = make_mesh(g, p, Discretization{});
    for (int N = 0; N < 3; ++N) {
      const auto sol = solve_velocity_mode(p, g, ModelOrder(N), ms, mesh, 12);
      double num = 0, den = 0;
      for (int j = 0; j <= 400; ++j) {
        const double y = g.lower() + g.width() * j / 400;
        const auto l = sol.local(y);
        num = std::max(num, std::abs(sol.curl(y)));
        den = std::max(den, std::abs(l.vt.d1) + std::abs(g.c(y) * l.vt.v) + std::abs(g.a(ms.k, y) * l.vn.v));
      }
      worst = std::max(worst, num / den);
    }
  };
  const SeparableGeometry strip(StripTorus{1, 1});
  MaterialParams p;
  const auto src = gaussian_modes(strip, 16);
  for (int k : {1, 3, 7}) check(strip, p, *src.find(k));
  const SeparableGeometry ann(Annulus{0.5, 1.0});
  MaterialParams q;
  q.omega = 11;
  q.eta = 1e-3;
  for (int k : {1, 4}) check(ann, q, annulus_gradient_mode(k, 0.75, 0.004));
  return worst;
}

// Largest relative modal divergence of the corrector, orders 0..2, both
// geometries, sampled through the layer and the cutoff transition.
inline double corrector_divergence_defect() {
  double worst = 0;
  for (const auto& g : {SeparableGeometry(StripTorus{1, 1}), SeparableGeometry(Annulus{0.25, 0.5})}) {
    MaterialParams p;
    const auto cut = default_cutoff(g);
    for (int N = 0; N < 3; ++N)
      for (auto w : {Wall::Lower, Wall::Upper})
        for (int k : {1, -4}) {
          const auto bl = build_phi(N, cplx(0.7, -0.3), g, w, k, p, cut);
          double num = 0, den = 0;
          for (int j = 0; j <= 500; ++j) {
            const double s = cut.s0 * j / 500;
            const double y = g.coord_from_distance(w, s);
            const auto jet = corrector_jet(bl, y);
            num = std::max(num, std::abs(corrector_divergence(bl, y)));
            den = std::max(den, std::abs(g.a(k, y) * jet.w.t) + std::abs(jet.dw.n) + std::abs(g.c(y) * jet.w.n));
          }
          worst = std::max(worst, num / den);
        }
  }
  return worst;
}

// Largest value of Im(form)/|form| of the wall form
// sum_w rho_w weak_beta |sigma|^2 |p_w|^2 over solved order 1/2 modes;
// negative means dissipative.
inline double dissipation_sign() {
  double worst = -1;
  auto check = [&](const SeparableGeometry& g, const MaterialParams& p, const ModalSource& ms) {
    const auto mesh = make_mesh(g, p, Discretization{});
    for (int N : {1, 2}) {
      const auto sol = solve_pressure_mode(p, g, ModelOrder(N), ms, mesh, 12);
      cplx form = 0;
      for (const auto& d : sol.problem.walls) {
        const CanonicalPressureCoeffs c{sol.problem.alpha, d.beta};
        form += g.weight(d.wall.coord) * c.weak_beta() * std::norm(d.sigma) * std::norm(sol.pressure(d.wall.coord).v);
      }
      worst = std::max(worst, form.imag() / std::abs(form));
    }
  };
  const SeparableGeometry strip(StripTorus{1, 1});
  MaterialParams p;
  const auto src = gaussian_modes(strip, 16);
  for (int k : {1, 2, 5, -3}) check(strip, p, *src.find(k));
  const SeparableGeometry ann(Annulus{0.5, 1.0});
  for (int k : {1, 3}) check(ann, p, annulus_gradient_mode(k, 0.75, 0.004));
  return worst;
}

// Per-mode rate of ||p1 - p0||_H1 / ||p0||_H1 against sqrt(eta) as eta -> 0.
inline double degeneration_rate() {
  const SeparableGeometry g(StripTorus{1, 1});
  const auto src = gaussian_modes(g, 16);
  const auto& ms = *src.find(3);
  std::vector<double> x, y;
  for (double eta : {1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
    MaterialParams p;
    p.eta = eta;
    Discretization d;
    d.layers = 0;  // the far-field models have no layer to resolve
    const auto mesh = make_mesh(g, p, d);
    const RegionQuadrature rq(g, AnalysisRegion{}, mesh, 16);
    const auto s0 = sample_on(velocity_from_pressure(solve_pressure_mode(p, g, ModelOrder(0), ms, mesh, 12)), rq);
    const auto s1 = sample_on(velocity_from_pressure(solve_pressure_mode(p, g, ModelOrder(1), ms, mesh, 12)), rq);
    const auto ref = mode_norms(g, ms.k, rq, s0);
    const auto err = mode_error_norms(g, ms.k, rq, s0, s1);
    x.push_back(std::sqrt(eta));
    y.push_back(std::sqrt(err.p_h1 / ref.p_h1));
  }
  return fit_slope(x, y);
}

// Relative mismatch between the modal (Parseval) region norms of the exact
// solution and a direct tensor quadrature of the reconstructed 2D fields.
inline double parseval_gap() {
  const SeparableGeometry g(StripTorus{1, 1});
  MaterialParams p;
  p.eta = 1e-3;
  const int K = 24;
  const auto src = project_to_modes(GaussianGradient{0.75, 0.5, 0.01}, g, K);
  Discretization d;
  const auto mesh = make_mesh(g, p, d);
  const RegionQuadrature rq(g, AnalysisRegion{}, mesh, 16);
  std::vector<std::vector<FieldSample>> s;
  double modal_p = 0, modal_v = 0;
  for (const auto& ms : src.modes) {
    s.push_back(sample_on(solve_exact_mode(p, g, ms, mesh, d.degree), rq));
    const auto n = mode_norms(g, ms.k, rq, s.back());
    modal_p += n.p_h1, modal_v += n.v_hdiv;
  }
  modal_p *= g.tangential_measure(), modal_v *= g.tangential_measure();
  // Direct: trapezoid in x (exact for trigonometric polynomials of degree < M)
  const int M = 4 * K + 1;
  double direct_p = 0, direct_v = 0;
  for (int i = 0; i < M; ++i) {
    const double x = double(i) / M;
    for (std::size_t j = 0; j < rq.y.size(); ++j) {
      FieldSample f;
      cplx px = 0;
      for (std::size_t m = 0; m < src.modes.size(); ++m) {
        const int k = src.modes[m].k;
        const cplx ph = std::exp(I * g.wavenumber(k) * x);
        const auto& v = s[m][j];
        f.p += v.p * ph, f.dp += v.dp * ph, f.vt += v.vt * ph, f.vn += v.vn * ph, f.div += v.div * ph;
        px += g.a(k, rq.y[j]) * v.p * ph;
      }
      const double w = rq.w[j] / M;
      direct_p += w * (std::norm(f.p) + std::norm(px) + std::norm(f.dp));
      direct_v += w * (std::norm(f.vt) + std::norm(f.vn) + std::norm(f.div));
    }
  }
  return std::max(std::abs(std::sqrt(modal_p / direct_p) - 1), std::abs(std::sqrt(modal_v / direct_v) - 1));
}

// Runs the converge command twice (one and two threads) on a small case and
// reports whether the CSV bodies agree byte for byte.
inline bool deterministic_csv(const std::string& scratch) {
  namespace fs = std::filesystem;
  const std::string cfg_text = R"({
    "geometry": {"kind": "strip"},
    "material": {"omega": 15, "eta": 1e-3},
    "source": {"kind": "gaussian"},
    "discretization": {"degree": 8, "modes": 16},
    "sweep": {"eta": [1e-3, 1e-4, 1e-5]}
  })";
  std::vector<std::vector<std::string>> bodies;
  for (int run = 0; run < 2; ++run) {
    auto cfg = parse_config(cfg_text);
    cfg.out_dir = (fs::path(scratch) / ("run" + std::to_string(run))).string();
    cfg.jobs = run + 1;
    std::ostringstream log;
    if (cmd_converge(cfg, log) != 0) return false;
    auto e = csv_body(cfg.out_dir + "/errors.csv");
    const auto s = csv_body(cfg.out_dir + "/slopes.csv");
    e.insert(e.end(), s.begin(), s.end());
    bodies.push_back(e);
  }
  return bodies[0] == bodies[1] && !bodies[0].empty();
}

}  // namespace props
