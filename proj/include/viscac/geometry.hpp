#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "params.hpp"

namespace viscac {

struct StripTorus {
  double period = 1.0;  // identified (tangential) direction x
  double height = 1.0;  // walls at y = 0 and y = height
};

struct Annulus {
  double r_inner = 0.25;
  double r_outer = 0.5;
};

enum class Wall { Lower, Upper };

// One wall of the domain. The outward normal is normal_sign * e_n where e_n
// is the wall-normal coordinate direction (e_y, or e_r). The tangent
// n_perp = rot(+90deg) n equals orientation * e_t (e_x, or e_theta).
struct BoundaryComponent {
  Wall id;
  double coord;        // wall-normal coordinate of the wall
  double kappa;        // signed curvature, positive where the domain is convex
  int normal_sign;
  int orientation;
  double length;       // circumference / period
  double radius;       // 1 for the strip, used as the arclength scale
};

// Modal coordinates: fields are sum_k u_k(y) e^{i k theta} (annulus) or
// sum_k u_k(y) e^{i 2 pi k x / L} (strip), with components (tangential,
// normal) in the (e_t, e_n) frame. For one mode the 2D operators become
//   grad p = (a p, p'),  div v = a v_t + v_n' + c v_n,
// with a(y) = i xi or i k / r and c(y) = 0 or 1/r. The frame is right-handed
// for the strip and left-handed for the annulus (e_r, e_theta order).
class SeparableGeometry {
 public:
  SeparableGeometry(StripTorus s) : shape_(s) { validate(); }
  SeparableGeometry(Annulus a) : shape_(a) { validate(); }

  bool is_annulus() const { return std::holds_alternative<Annulus>(shape_); }
  const StripTorus& strip() const { return std::get<StripTorus>(shape_); }
  const Annulus& annulus() const { return std::get<Annulus>(shape_); }

  double lower() const { return is_annulus() ? annulus().r_inner : 0.0; }
  double upper() const { return is_annulus() ? annulus().r_outer : strip().height; }
  double width() const { return upper() - lower(); }

  // Volume weight of the modal reduction (Jacobian of polar coordinates).
  double weight(double y) const { return is_annulus() ? y : 1.0; }
  // Measure of the tangential direction; Parseval factor for modal norms.
  double tangential_measure() const { return is_annulus() ? 2.0 * pi : strip().period; }

  double wavenumber(int k) const {
    return is_annulus() ? double(k) : 2.0 * pi * k / strip().period;
  }
  cplx a(int k, double y) const {
    return is_annulus() ? I * double(k) / y : I * wavenumber(k);
  }
  cplx da(int k, double y) const { return is_annulus() ? -I * double(k) / (y * y) : cplx{}; }
  double c(double y) const { return is_annulus() ? 1.0 / y : 0.0; }
  double dc(double y) const { return is_annulus() ? -1.0 / (y * y) : 0.0; }
  // +1 if (e_t, e_n) is right-handed.
  int handedness() const { return is_annulus() ? -1 : 1; }

  BoundaryComponent boundary(Wall w) const {
    if (is_annulus()) {
      const auto& an = annulus();
      if (w == Wall::Lower)
        return {w, an.r_inner, -1.0 / an.r_inner, -1, -1, 2 * pi * an.r_inner, an.r_inner};
      return {w, an.r_outer, 1.0 / an.r_outer, 1, 1, 2 * pi * an.r_outer, an.r_outer};
    }
    const auto& st = strip();
    if (w == Wall::Lower) return {w, 0.0, 0.0, -1, 1, st.period, 1.0};
    return {w, st.height, 0.0, 1, -1, st.period, 1.0};
  }
  std::array<BoundaryComponent, 2> boundaries() const {
    return {boundary(Wall::Lower), boundary(Wall::Upper)};
  }

  // Accepts "lower"/"upper" and the geometry-specific aliases
  // "bottom"/"top" (strip) and "inner"/"outer" (annulus).
  Wall wall_by_name(const std::string& name) const {
    if (name == "lower") return Wall::Lower;
    if (name == "upper") return Wall::Upper;
    if (!is_annulus() && name == "bottom") return Wall::Lower;
    if (!is_annulus() && name == "top") return Wall::Upper;
    if (is_annulus() && name == "inner") return Wall::Lower;
    if (is_annulus() && name == "outer") return Wall::Upper;
    throw std::invalid_argument("unknown boundary id '" + name + "'");
  }

  // Distance from wall w and its derivative with respect to y.
  double distance(Wall w, double y) const { return w == Wall::Lower ? y - lower() : upper() - y; }
  double distance_slope(Wall w) const { return w == Wall::Lower ? 1.0 : -1.0; }
  double coord_from_distance(Wall w, double s) const {
    return w == Wall::Lower ? lower() + s : upper() - s;
  }

  double max_abs_curvature() const { return is_annulus() ? 1.0 / annulus().r_inner : 0.0; }

 private:
  void validate() const {
    if (is_annulus()) {
      const auto& an = annulus();
      if (!(an.r_inner > 0)) throw std::invalid_argument("r_inner must be > 0");
      if (!(an.r_outer > an.r_inner)) throw std::invalid_argument("r_outer must exceed r_inner");
    } else {
      const auto& st = strip();
      if (!(st.period > 0)) throw std::invalid_argument("period must be > 0");
      if (!(st.height > 0)) throw std::invalid_argument("height must be > 0");
    }
  }

  std::variant<StripTorus, Annulus> shape_;
};

inline double curvature(const SeparableGeometry& g, Wall w) { return g.boundary(w).kappa; }
inline double curvature(const SeparableGeometry& g, const std::string& wall) {
  return curvature(g, g.wall_by_name(wall));
}

// Multiplier of d/dt on the trace of mode k, t the arclength along n_perp.
inline cplx tangential_symbol(const SeparableGeometry& g, Wall w, int k) {
  const auto b = g.boundary(w);
  return double(b.orientation) * g.a(k, b.coord);
}

struct LocalCoords {
  double t;
  double s;
  double S;
};

// t is measured along n_perp from tangential coordinate 0 (x, or theta).
inline LocalCoords local_coords(const SeparableGeometry& g, Wall w, double tangential,
                                double y, double eps) {
  const auto b = g.boundary(w);
  const double t = b.orientation * b.radius * tangential;
  const double s = g.distance(w, y);
  if (s < 0) throw std::invalid_argument("point outside the domain");
  return {t, s, s / eps};
}

// Smooth cut-off: 1 on [0, s1], 0 beyond s0, C-infinity in between.
struct CutoffSpec {
  double s1;
  double s0;
};

inline CutoffSpec default_cutoff(const SeparableGeometry& g) {
  const double s1 = 0.1 * g.width();
  return {s1, 2.0 * s1};
}

inline void validate_cutoff(const CutoffSpec& c, const SeparableGeometry& g) {
  if (!(c.s1 > 0 && c.s1 < c.s0)) throw std::invalid_argument("cutoff needs 0 < s1 < s0");
  double lim = 0.5 * g.width();
  if (g.is_annulus()) lim = std::min(lim, 0.5 / g.max_abs_curvature());
  if (!(c.s0 < lim)) throw std::invalid_argument("cutoff support s0 too large for geometry");
}

namespace detail {
// g(t) = exp(-1/t) and its first two derivatives, zero for t <= 0.
inline std::array<double, 3> smooth_ramp(double t) {
  if (t <= 0) return {0.0, 0.0, 0.0};
  const double e = std::exp(-1.0 / t);
  const double t2 = t * t;
  return {e, e / t2, e * (1.0 / (t2 * t2) - 2.0 / (t2 * t))};
}
}  // namespace detail

// Returns chi, dchi/ds, d2chi/ds2.
inline std::array<double, 3> cutoff_jet(const CutoffSpec& c, double s) {
  if (s <= c.s1) return {1.0, 0.0, 0.0};
  if (s >= c.s0) return {0.0, 0.0, 0.0};
  const double d = c.s0 - c.s1;
  const double u = (s - c.s1) / d;
  const auto ga = detail::smooth_ramp(1.0 - u);
  const auto gb = detail::smooth_ramp(u);
  const double A = ga[0], dA = -ga[1], ddA = ga[2];
  const double B = gb[0], dB = gb[1], ddB = gb[2];
  const double den = A + B;
  const double num = dA * B - A * dB;
  const double dnum = ddA * B - A * ddB;
  const double f1 = num / (den * den);
  const double f2 = (dnum * den - 2.0 * num * (dA + dB)) / (den * den * den);
  return {A / den, f1 / d, f2 / (d * d)};
}

inline double cutoff_eval(const CutoffSpec& c, double s) {
  if (s < 0) throw std::invalid_argument("cutoff evaluated at negative distance");
  return cutoff_jet(c, s)[0];
}

}  // namespace viscac
