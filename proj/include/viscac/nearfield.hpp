#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"
#include "params.hpp"
#include "sources.hpp"

namespace viscac {

// Boundary-layer profile operators applied to the wall trace V = v . n_perp
// of one mode. d^2/dt^2 acts on the mode as sigma^2.
//   E0 = V
//   E1 = 1/4 (3+i) kappa S V
//   E2 = i(1+gamma') omega^2/(2c^2) V + 1/4 (i + (1+i)S)(3/4 kappa^2 V + d_t^2 V) + 3/8 kappa^2 S^2 V
// Returned as coefficients of 1, S, S^2.
inline std::array<cplx, 3> E_coefficients(int ell, cplx V, cplx sigma, double kappa, const MaterialParams& p) {
  switch (ell) {
    case 0:
      return {V, 0.0, 0.0};
    case 1:
      return {0.0, 0.25 * cplx(3, 1) * kappa * V, 0.0};
    case 2: {
      const cplx Q = 0.75 * kappa * kappa * V + sigma * sigma * V;
      const cplx c0 = I * (1 + p.gamma_prime()) * p.omega * p.omega / (2 * p.c * p.c) * V + 0.25 * I * Q;
      return {c0, 0.25 * cplx(1, 1) * Q, 0.375 * kappa * kappa * V};
    }
    default:
      throw std::invalid_argument("E operators are only available up to order 2");
  }
}

inline cplx eval_E(int ell, cplx V, cplx sigma, double S, double kappa, const MaterialParams& p) {
  const auto c = E_coefficients(ell, V, sigma, kappa, p);
  return c[0] + S * (c[1] + S * c[2]);
}

// Printed: the operators above as they stand. TraceMatched: the constant
// term of each E_l (l >= 1) is replaced by 1/2 (1+i) times its S-term, the
// value for which the corrector cancels the far-field tangential trace at
// the wall. The two differ by the omega^2 term of E2 and by a kappa term
// of E1 on curved walls.
enum class ProfileForm { Printed, TraceMatched };

// phi(S) = 1/2 (1+i) exp(-(1-i) S) P(S) for one wall and one mode; the
// corrector is w = eps curl(phi chi).
struct BoundaryLayerProfile {
  Wall wall = Wall::Lower;
  int k = 0;
  int order = 0;
  double eps = 0;
  cplx trace{};                 // V
  std::array<cplx, 3> poly{};   // P(S) = sum poly[m] S^m
  CutoffSpec cutoff{0.1, 0.2};
  SeparableGeometry geom{StripTorus{}};

  // phi and its first two S-derivatives.
  std::array<cplx, 3> phi(double S) const {
    const cplx lam = cplx(1, -1);
    const cplx e = 0.5 * cplx(1, 1) * std::exp(-lam * S);
    const cplx P = poly[0] + S * (poly[1] + S * poly[2]);
    const cplx dP = poly[1] + 2.0 * S * poly[2];
    const cplx ddP = 2.0 * poly[2];
    return {e * P, e * (dP - lam * P), e * (ddP - 2.0 * lam * dP + lam * lam * P)};
  }
};

inline BoundaryLayerProfile build_phi(int order, cplx trace, const SeparableGeometry& g, Wall w, int k,
                                      const MaterialParams& p, const CutoffSpec& cutoff,
                                      ProfileForm form = ProfileForm::TraceMatched) {
  if (order < 0 || order > 2) throw std::invalid_argument("model order must be 0, 1 or 2");
  BoundaryLayerProfile bl;
  bl.wall = w;
  bl.k = k;
  bl.order = order;
  bl.eps = epsilon(p);
  bl.trace = trace;
  bl.cutoff = cutoff;
  bl.geom = g;
  const auto b = g.boundary(w);
  const cplx sig = tangential_symbol(g, w, k);
  double epl = 1;
  for (int ell = 0; ell <= order; ++ell, epl *= bl.eps) {
    auto c = E_coefficients(ell, trace, sig, b.kappa, p);
    if (form == ProfileForm::TraceMatched && ell > 0) c[0] = 0.5 * cplx(1, 1) * c[1];
    for (int m = 0; m < 3; ++m) bl.poly[m] += epl * c[m];
  }
  return bl;
}

// Corrector components (t, n) of one mode at y and their y-derivatives.
struct CorrectorJet {
  ModalVector w, dw;
};

inline CorrectorJet corrector_jet(const BoundaryLayerProfile& bl, double y) {
  const auto& g = bl.geom;
  const double s = g.distance(bl.wall, y);
  if (s < 0) throw std::invalid_argument("point outside the domain");
  if (s >= bl.cutoff.s0) return {};
  const double ds = g.distance_slope(bl.wall);
  const auto ph = bl.phi(s / bl.eps);
  const auto ch = cutoff_jet(bl.cutoff, s);
  const double ie = 1.0 / bl.eps;
  // Psi = phi chi as a function of s, then of y.
  const cplx Psi = ph[0] * ch[0];
  const cplx Psi_s = ph[1] * ie * ch[0] + ph[0] * ch[1];
  const cplx Psi_ss = ph[2] * ie * ie * ch[0] + 2.0 * ph[1] * ie * ch[1] + ph[0] * ch[2];
  const cplx dPsi = ds * Psi_s, ddPsi = Psi_ss;
  const cplx a = g.a(bl.k, y), da = g.da(bl.k, y);
  const double h = g.handedness() * bl.eps;
  CorrectorJet r;
  r.w = {h * dPsi, -h * a * Psi};
  r.dw = {h * ddPsi, -h * (da * Psi + a * dPsi)};
  return r;
}

inline ModalVector eval_corrector(const BoundaryLayerProfile& bl, double y) { return corrector_jet(bl, y).w; }

inline cplx corrector_divergence(const BoundaryLayerProfile& bl, double y) {
  const auto j = corrector_jet(bl, y);
  return bl.geom.a(bl.k, y) * j.w.t + j.dw.n + bl.geom.c(y) * j.w.n;
}

// Far-field wall trace V = v . n_perp of a modal velocity.
inline cplx wall_trace(const SeparableGeometry& g, Wall w, const ModalVector& v_at_wall) {
  return double(g.boundary(w).orientation) * v_at_wall.t;
}

}  // namespace viscac
