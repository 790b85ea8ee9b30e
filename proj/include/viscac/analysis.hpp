#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fem1d/mesh.hpp"
#include "fem1d/quadrature.hpp"
#include "geometry.hpp"
#include "modal.hpp"

namespace viscac {

// Interior region: the domain minus a delta-neighbourhood of the walls.
struct AnalysisRegion {
  double delta = 0.2;

  std::pair<double, double> interval(const SeparableGeometry& g) const {
    if (!(delta > 0)) throw std::invalid_argument("analysis delta must be > 0");
    const double a = g.lower() + delta, b = g.upper() - delta;
    if (!(b > a)) throw std::invalid_argument("analysis region is empty");
    return {a, b};
  }
};

// Quadrature over the region, with panel breaks at the mesh nodes so that
// piecewise polynomial integrands are integrated without kinks.
struct RegionQuadrature {
  std::vector<double> y, w;  // weights include the volume weight

  RegionQuadrature(const SeparableGeometry& g, const AnalysisRegion& region, const fem1d::Mesh1D& mesh,
                   int points_per_panel) {
    const auto [a, b] = region.interval(g);
    std::vector<double> br{a};
    for (double x : mesh.nodes)
      if (x > a && x < b) br.push_back(x);
    br.push_back(b);
    // Split long panels so every panel is at most (b-a)/8 wide.
    std::vector<double> brk{br[0]};
    for (std::size_t i = 1; i < br.size(); ++i) {
      const int n = std::max(1, int(std::ceil((br[i] - br[i - 1]) * 8 / (b - a) - 1e-9)));
      for (int j = 1; j <= n; ++j) brk.push_back(br[i - 1] + (br[i] - br[i - 1]) * j / n);
    }
    const auto& q = fem1d::gauss_legendre(points_per_panel);
    for (std::size_t i = 1; i < brk.size(); ++i) {
      const double h = brk[i] - brk[i - 1];
      for (std::size_t j = 0; j < q.x.size(); ++j) {
        const double yy = brk[i - 1] + 0.5 * h * (q.x[j] + 1);
        y.push_back(yy);
        w.push_back(0.5 * h * q.w[j] * g.weight(yy));
      }
    }
  }
};

// Squared norms of one mode, per unit tangential measure.
struct ModeNorms {
  double p_h1 = 0;
  double v_hdiv = 0;
};

inline double h1_density(const FieldSample& s, cplx a) {
  return std::norm(s.p) + std::norm(a * s.p) + std::norm(s.dp);
}
inline double hdiv_density(const FieldSample& s) {
  return std::norm(s.vt) + std::norm(s.vn) + std::norm(s.div);
}
inline FieldSample difference(const FieldSample& x, const FieldSample& y) {
  return {x.p - y.p, x.dp - y.dp, x.vt - y.vt, x.vn - y.vn, x.div - y.div};
}

// Norms of samples[i] taken at rq.y[i].
inline ModeNorms mode_norms(const SeparableGeometry& g, int k, const RegionQuadrature& rq,
                            const std::vector<FieldSample>& s) {
  ModeNorms n;
  for (std::size_t i = 0; i < rq.y.size(); ++i) {
    n.p_h1 += rq.w[i] * h1_density(s[i], g.a(k, rq.y[i]));
    n.v_hdiv += rq.w[i] * hdiv_density(s[i]);
  }
  return n;
}

inline ModeNorms mode_error_norms(const SeparableGeometry& g, int k, const RegionQuadrature& rq,
                                  const std::vector<FieldSample>& exact, const std::vector<FieldSample>& appr) {
  if (exact.size() != rq.y.size() || appr.size() != rq.y.size())
    throw std::invalid_argument("sample sets do not match the region quadrature");
  ModeNorms n;
  for (std::size_t i = 0; i < rq.y.size(); ++i) {
    const auto d = difference(exact[i], appr[i]);
    n.p_h1 += rq.w[i] * h1_density(d, g.a(k, rq.y[i]));
    n.v_hdiv += rq.w[i] * hdiv_density(d);
  }
  return n;
}

template <class Solution>
std::vector<FieldSample> sample_on(const Solution& s, const RegionQuadrature& rq) {
  std::vector<FieldSample> out;
  out.reserve(rq.y.size());
  for (double y : rq.y) out.push_back(s.sample(y));
  return out;
}

struct ModellingError {
  double rel_p = 0, rel_v = 0;
  double abs_p = 0, abs_v = 0;
  double total() const { return rel_p + rel_v; }
};

// Accumulates per-mode contributions; Parseval gives the 2D norms as the
// tangential measure times the sum over modes.
struct ErrorAccumulator {
  double ref_p = 0, ref_v = 0, err_p = 0, err_v = 0;
  void add(const ModeNorms& ref, const ModeNorms& err) {
    ref_p += ref.p_h1;
    ref_v += ref.v_hdiv;
    err_p += err.p_h1;
    err_v += err.v_hdiv;
  }
  ModellingError result(double tangential_measure) const {
    if (!(ref_p > 0) || !(ref_v > 0)) throw std::runtime_error("reference solution vanishes on the region");
    ModellingError m;
    m.abs_p = std::sqrt(tangential_measure * err_p);
    m.abs_v = std::sqrt(tangential_measure * err_v);
    m.rel_p = std::sqrt(err_p / ref_p);
    m.rel_v = std::sqrt(err_v / ref_v);
    return m;
  }
};

// Modelling error between two per-mode solution sets (matched by index).
template <class Exact, class Appr>
ModellingError modelling_error(const SeparableGeometry& g, const std::vector<Exact>& exact,
                               const std::vector<Appr>& appr, const std::vector<int>& modes,
                               const RegionQuadrature& rq) {
  if (exact.size() != appr.size() || exact.size() != modes.size())
    throw std::invalid_argument("mode mismatch between solution sets");
  ErrorAccumulator acc;
  for (std::size_t m = 0; m < exact.size(); ++m) {
    const auto se = sample_on(exact[m], rq);
    const auto sa = sample_on(appr[m], rq);
    acc.add(mode_norms(g, modes[m], rq, se), mode_error_norms(g, modes[m], rq, se, sa));
  }
  return acc.result(g.tangential_measure());
}

// ---------------------------------------------------------------------------
// Slopes

struct SlopeFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  int first = -1, last = -1;  // window, inclusive indices into the input
  bool stable = false;
};

// Least squares slope of log(y) against log(x) over [first, last].
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y, int first, int last) {
  if (last - first + 1 < 2) throw std::invalid_argument("slope fit needs at least two samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = last - first + 1;
  for (int i = first; i <= last; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::invalid_argument("non-positive value in slope fit window");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) throw std::invalid_argument("degenerate abscissae in slope fit");
  return (n * sxy - sx * sy) / den;
}

inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  return fit_slope(x, y, 0, int(x.size()) - 1);
}

// Window selection: the largest contiguous run of valid samples (at least
// three) whose local slopes all stay within +-tol of the slope fitted over
// the run. Ties go to the run with the smaller spread of local slopes.
// Invalid samples (NaN, non-positive) break runs. Falls back to all valid
// samples, flagged unstable, when no run qualifies.
inline SlopeFit fit_slope_auto(const std::vector<double>& x, const std::vector<double>& y, double tol = 0.15) {
  const int n = int(x.size());
  auto valid = [&](int i) { return std::isfinite(y[i]) && y[i] > 0 && x[i] > 0; };
  SlopeFit best;
  double best_spread = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      bool ok = true;
      for (int m = i; m <= j && ok; ++m) ok = valid(m);
      if (!ok) break;
      const double s = fit_slope(x, y, i, j);
      double spread = 0;
      for (int m = i; m < j && ok; ++m) {
        const double loc = fit_slope(x, y, m, m + 1);
        const double dev = std::abs(loc - s);
        spread = std::max(spread, dev);
        ok = dev <= tol * std::abs(s);
      }
      if (!ok) continue;
      const int len = j - i + 1;
      const int blen = best.stable ? best.last - best.first + 1 : 0;
      if (len > blen || (len == blen && spread < best_spread)) {
        best = {s, i, j, true};
        best_spread = spread;
      }
    }
  }
  if (best.stable) return best;
  std::vector<double> vx, vy;
  int first = -1, last = -1;
  for (int i = 0; i < n; ++i)
    if (valid(i)) {
      vx.push_back(x[i]), vy.push_back(y[i]);
      if (first < 0) first = i;
      last = i;
    }
  if (vx.size() >= 2) best = {fit_slope(vx, vy), first, last, false};
  return best;
}

// Neumann eigenfrequencies of the unit strip torus [0,1] x [0,1] with the
// labelling used for the reference experiments.
inline double eigenfrequency(int k, int m) {
  if (k < 1 || m < 0) throw std::invalid_argument("eigenfrequency needs k >= 1, m >= 0");
  return pi * std::sqrt(double(k) * k + 4.0 * m * m);
}

// Distance from omega to the nearest eigenfrequency omega/c of the unit
// strip torus (includes k = 0 families via m).
inline double distance_to_resonance(double omega, double c = 1.0) {
  double best = std::numeric_limits<double>::infinity();
  const double w = omega / c;
  for (int k = 0; k < 64; ++k)
    for (int m = 0; m < 32; ++m) {
      if (k == 0 && m == 0) continue;
      best = std::min(best, std::abs(w - pi * std::sqrt(double(k) * k + 4.0 * m * m)));
    }
  return best * c;
}

}  // namespace viscac
