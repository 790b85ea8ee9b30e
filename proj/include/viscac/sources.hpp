#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fem1d/quadrature.hpp"
#include "geometry.hpp"
#include "params.hpp"
#include "spline.hpp"

namespace viscac {

// (tangential, normal) components of one mode.
struct ModalVector {
  cplx t{}, n{};
};

// Profiles of one source mode and their first two wall-normal derivatives.
struct SourceJet {
  cplx ft{}, dft{}, ddft{};
  cplx fn{}, dfn{}, ddfn{};
};

struct ModalSource {
  int k = 0;
  std::function<SourceJet(double)> jet;
  double energy = 0;  // tangential measure * int |f_k|^2 weight dy

  ModalVector value(double y) const {
    const auto j = jet(y);
    return {j.ft, j.fn};
  }
};

inline ModalSource zero_source(int k) {
  return {k, [](double) { return SourceJet{}; }, 0.0};
}

// Scalar curl of the mode and its derivative (true 2D curl, independent of
// the frame handedness).
inline std::array<cplx, 2> source_curl(const SeparableGeometry& g, const ModalSource& ms, double y) {
  const auto j = ms.jet(y);
  const cplx a = g.a(ms.k, y), da = g.da(ms.k, y);
  const double c = g.c(y), dc = g.dc(y);
  const double h = g.handedness();
  const cplx C = j.dft + c * j.ft - a * j.fn;
  const cplx dC = j.ddft + dc * j.ft + c * j.dft - da * j.fn - a * j.dfn;
  return {-h * C, -h * dC};
}

// Vector curl of the scalar curl, and the wall-normal derivative of its
// normal component (needed for the divergence of post-processed fields).
struct CurlCurl {
  ModalVector v;
  cplx dn{};
};

inline CurlCurl curlcurl(const SeparableGeometry& g, const ModalSource& ms, double y) {
  const auto [c, dc] = source_curl(g, ms, y);
  const double h = g.handedness();
  const cplx a = g.a(ms.k, y), da = g.da(ms.k, y);
  return {{h * dc, -h * a * c}, -h * (da * c + a * dc)};
}

// M_j for j = 0, 2: (i omega/(rho0 c^2)) (-i/2 curl curl)^{j/2} f.
inline ModalVector curlcurl_iterate(const SeparableGeometry& g, const MaterialParams& p,
                                    const ModalSource& ms, int j, double y) {
  if (j != 0 && j != 2) throw std::invalid_argument("curl-curl iterate only defined for j = 0, 2");
  const cplx s = I * p.omega / (p.rho0 * p.c * p.c);
  if (j == 0) {
    const auto f = ms.value(y);
    return {s * f.t, s * f.n};
  }
  const auto cc = curlcurl(g, ms, y).v;
  return {s * (-0.5 * I) * cc.t, s * (-0.5 * I) * cc.n};
}

struct BoundaryTraces {
  cplx f_n{};           // f . n
  cplx f_nperp{};       // f . n_perp
  cplx d_f_nperp{};     // d/dt (f . n_perp)
  cplx d_kappa_f_nperp{};
  cplx curlcurl_n{};    // (curl curl f) . n
};

inline BoundaryTraces boundary_traces(const SeparableGeometry& g, const ModalSource& ms, Wall w) {
  const auto b = g.boundary(w);
  const auto f = ms.value(b.coord);
  const cplx sig = tangential_symbol(g, w, ms.k);
  BoundaryTraces t;
  t.f_n = double(b.normal_sign) * f.n;
  t.f_nperp = double(b.orientation) * f.t;
  t.d_f_nperp = sig * t.f_nperp;
  t.d_kappa_f_nperp = b.kappa * t.d_f_nperp;
  t.curlcurl_n = double(b.normal_sign) * curlcurl(g, ms, b.coord).v.n;
  return t;
}

// ---------------------------------------------------------------------------
// Source specifications

// f = grad exp(-|x - x0|^2 / width). x0 is Cartesian; for the strip the
// Gaussian is periodized with the nearest images.
struct GaussianGradient {
  double x0 = 0.75;
  double y0 = 0.5;
  double width = 0.005;
};

// One explicitly given mode.
struct ModalManufactured {
  int k = 0;
  std::function<SourceJet(double)> jet;
};

using SourceSpec = std::variant<GaussianGradient, ModalManufactured>;

// Reads columns y, ft_re, ft_im, fn_re, fn_im (header line optional, '#'
// comments skipped) and interpolates with cubic splines.
inline ModalManufactured load_modal_csv(const std::string& path, int k) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open source profile '" + path + "'");
  std::vector<double> cols[5];
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    double v[5];
    if (!(is >> v[0] >> v[1] >> v[2] >> v[3] >> v[4])) {
      if (cols[0].empty()) continue;  // header
      throw std::invalid_argument("malformed row in source profile '" + path + "'");
    }
    for (int i = 0; i < 5; ++i) cols[i].push_back(v[i]);
  }
  auto sp = std::make_shared<std::array<CubicSpline, 4>>();
  for (int i = 0; i < 4; ++i) (*sp)[i] = CubicSpline(cols[0], cols[i + 1]);
  return {k, [sp](double y) {
            const auto a = (*sp)[0].jet(y), b = (*sp)[1].jet(y);
            const auto c = (*sp)[2].jet(y), d = (*sp)[3].jet(y);
            return SourceJet{{a[0], b[0]}, {a[1], b[1]}, {a[2], b[2]},
                             {c[0], d[0]}, {c[1], d[1]}, {c[2], d[2]}};
          }};
}

namespace detail {
// exp(q(y)) with q quadratic: value and three derivatives.
inline std::array<double, 4> gauss_jet(double q, double dq, double ddq) {
  const double e = std::exp(q);
  return {e, dq * e, (ddq + dq * dq) * e, (3 * dq * ddq + dq * dq * dq) * e};
}
}  // namespace detail

// Direct evaluation of the source at (tangential coordinate, y), components
// in the (e_t, e_n) frame.
inline ModalVector evaluate_source(const GaussianGradient& s, const SeparableGeometry& g,
                                   double tc, double y) {
  if (!g.is_annulus()) {
    const double L = g.strip().period;
    ModalVector f;
    for (int img = -1; img <= 1; ++img) {
      const double dx = tc - s.x0 - img * L, dy = y - s.y0;
      const double e = std::exp(-(dx * dx + dy * dy) / s.width);
      f.t += -2.0 * dx / s.width * e;
      f.n += -2.0 * dy / s.width * e;
    }
    return f;
  }
  const double X = y * std::cos(tc), Y = y * std::sin(tc);
  const double dx = X - s.x0, dy = Y - s.y0;
  const double e = std::exp(-(dx * dx + dy * dy) / s.width);
  const double gx = -2.0 * dx / s.width * e, gy = -2.0 * dy / s.width * e;
  // e_r = (cos, sin), e_theta = (-sin, cos)
  return {-std::sin(tc) * gx + std::cos(tc) * gy, std::cos(tc) * gx + std::sin(tc) * gy};
}

struct ModalSourceSet {
  std::vector<ModalSource> modes;  // ordered k = -K..K, or a single mode
  std::vector<std::string> warnings;
  double energy = 0;

  const ModalSource* find(int k) const {
    for (const auto& m : modes)
      if (m.k == k) return &m;
    return nullptr;
  }
};

// tangential measure * int |f_k|^2 weight dy, composite Gauss.
inline double modal_energy(const SeparableGeometry& g, const ModalSource& ms, int panels = 64) {
  const auto& q = fem1d::gauss_legendre(12);
  const double h = g.width() / panels;
  double e = 0;
  for (int i = 0; i < panels; ++i)
    for (std::size_t j = 0; j < q.x.size(); ++j) {
      const double y = g.lower() + h * (i + 0.5 * (q.x[j] + 1));
      const auto f = ms.value(y);
      e += 0.5 * h * q.w[j] * g.weight(y) * (std::norm(f.t) + std::norm(f.n));
    }
  return e * g.tangential_measure();
}

inline ModalSourceSet project_to_modes(const SourceSpec& spec, const SeparableGeometry& g, int K) {
  if (K < 0) throw std::invalid_argument("mode truncation must be >= 0");
  ModalSourceSet set;
  if (const auto* mm = std::get_if<ModalManufactured>(&spec)) {
    ModalSource ms{mm->k, mm->jet, 0.0};
    ms.energy = modal_energy(g, ms);
    set.energy = ms.energy;
    set.modes.push_back(std::move(ms));
    return set;
  }
  const auto gs = std::get<GaussianGradient>(spec);
  if (!(gs.width > 0)) throw std::invalid_argument("source width must be > 0");
  const int M = 4 * K + 4;

  if (!g.is_annulus()) {
    const double L = g.strip().period;
    const double y0 = gs.y0;
    const double wall = std::max(std::exp(-y0 * y0 / gs.width),
                                 std::exp(-(g.upper() - y0) * (g.upper() - y0) / gs.width));
    if (wall > 1e-10) throw std::invalid_argument("source is not localized inside the domain");
    // Fourier coefficients of the periodized 1D Gaussian in x.
    for (int k = -K; k <= K; ++k) {
      const double xi = g.wavenumber(k);
      cplx gk = 0;
      for (int m = 0; m < M; ++m) {
        const double x = L * m / M;
        double gx = 0;
        for (int img = -1; img <= 1; ++img) {
          const double dx = x - gs.x0 - img * L;
          gx += std::exp(-dx * dx / gs.width);
        }
        gk += gx * std::exp(-I * xi * x);
      }
      gk /= double(M);
      const double w = gs.width;
      ModalSource ms;
      ms.k = k;
      ms.jet = [gk, xi, y0, w](double y) {
        const auto G = detail::gauss_jet(-(y - y0) * (y - y0) / w, -2 * (y - y0) / w, -2 / w);
        const cplx ix = I * xi * gk;
        return SourceJet{ix * G[0], ix * G[1], ix * G[2], gk * G[1], gk * G[2], gk * G[3]};
      };
      ms.energy = modal_energy(g, ms);
      set.energy += ms.energy;
      set.modes.push_back(std::move(ms));
    }
  } else {
    for (int k = -K; k <= K; ++k) {
      ModalSource ms;
      ms.k = k;
      ms.jet = [gs, k, M](double r) {
        // theta-DFT of G and its r-derivatives at this radius.
        std::array<cplx, 4> Gk{};
        for (int m = 0; m < M; ++m) {
          const double th = 2 * pi * m / M;
          const double ct = std::cos(th), st = std::sin(th);
          const double px = gs.x0, py = gs.y0;
          const double q = -((r * ct - px) * (r * ct - px) + (r * st - py) * (r * st - py)) / gs.width;
          const double dq = -(2 * r - 2 * (px * ct + py * st)) / gs.width;
          const auto G = detail::gauss_jet(q, dq, -2 / gs.width);
          const cplx ph = std::exp(-I * double(k) * th);
          for (int d = 0; d < 4; ++d) Gk[d] += G[d] * ph;
        }
        for (auto& v : Gk) v /= double(M);
        const cplx ik = I * double(k);
        // f_theta = (1/r) dG/dtheta, f_r = dG/dr
        return SourceJet{ik * Gk[0] / r,
                         ik * (Gk[1] / r - Gk[0] / (r * r)),
                         ik * (Gk[2] / r - 2.0 * Gk[1] / (r * r) + 2.0 * Gk[0] / (r * r * r)),
                         Gk[1], Gk[2], Gk[3]};
      };
      ms.energy = modal_energy(g, ms);
      set.energy += ms.energy;
      set.modes.push_back(std::move(ms));
    }
  }
  if (K > 0) {
    const double top = set.modes.front().energy + set.modes.back().energy;
    if (top > 1e-8 * set.energy)
      set.warnings.push_back("top retained source mode carries " + std::to_string(top / set.energy) +
                             " of the energy; increase the mode truncation");
  }
  return set;
}

// Reconstructs the 2D source at a point from its modes.
inline ModalVector reconstruct(const ModalSourceSet& set, const SeparableGeometry& g, double tc,
                               double y) {
  ModalVector f;
  for (const auto& ms : set.modes) {
    const cplx ph = std::exp(I * (g.is_annulus() ? double(ms.k) : g.wavenumber(ms.k)) * tc);
    const auto v = ms.value(y);
    f.t += v.t * ph;
    f.n += v.n * ph;
  }
  return f;
}

}  // namespace viscac
