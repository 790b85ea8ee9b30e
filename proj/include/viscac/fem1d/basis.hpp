#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace viscac::fem1d {

// Shape function values and first/second derivatives on the reference
// element [-1, 1], indexed by local shape number.
struct ShapeValues {
  std::vector<double> v, d1, d2;
  void resize(int n) {
    v.assign(n, 0.0);
    d1.assign(n, 0.0);
    d2.assign(n, 0.0);
  }
};

// Legendre polynomials L_0..L_n with first and second derivatives.
inline void legendre_all(int n, double x, double* L, double* dL, double* ddL) {
  L[0] = 1.0;
  dL[0] = 0.0;
  ddL[0] = 0.0;
  if (n == 0) return;
  L[1] = x;
  dL[1] = 1.0;
  ddL[1] = 0.0;
  for (int j = 1; j < n; ++j) {
    L[j + 1] = ((2.0 * j + 1.0) * x * L[j] - j * L[j - 1]) / (j + 1.0);
    dL[j + 1] = dL[j - 1] + (2.0 * j + 1.0) * L[j];
    ddL[j + 1] = ddL[j - 1] + (2.0 * j + 1.0) * dL[j];
  }
}

enum class BasisKind {
  IntegratedLegendre,  // C0: two vertex hats plus p-1 bubbles
  Legendre             // discontinuous, L2-orthonormal Legendre modes
};

struct Basis1D {
  int degree = 1;
  BasisKind kind = BasisKind::IntegratedLegendre;

  Basis1D() = default;
  Basis1D(int p, BasisKind k = BasisKind::IntegratedLegendre) : degree(p), kind(k) {
    if (p < 0 || (k == BasisKind::IntegratedLegendre && p < 1))
      throw std::invalid_argument("basis degree too low");
  }
  int size() const { return degree + 1; }
  bool continuous() const { return kind == BasisKind::IntegratedLegendre; }

  // Reference derivatives d/dxi.
  void eval(double xi, ShapeValues& out) const {
    const int n = size();
    out.resize(n);
    std::vector<double> L(n + 1), dL(n + 1), ddL(n + 1);
    legendre_all(degree, xi, L.data(), dL.data(), ddL.data());
    if (kind == BasisKind::Legendre) {
      for (int j = 0; j < n; ++j) {
        const double s = std::sqrt((2.0 * j + 1.0) / 2.0);
        out.v[j] = s * L[j];
        out.d1[j] = s * dL[j];
        out.d2[j] = s * ddL[j];
      }
      return;
    }
    out.v[0] = 0.5 * (1.0 - xi);
    out.d1[0] = -0.5;
    out.v[1] = 0.5 * (1.0 + xi);
    out.d1[1] = 0.5;
    for (int j = 2; j <= degree; ++j) {
      const double s = 1.0 / std::sqrt(2.0 * (2.0 * j - 1.0));
      out.v[j] = s * (L[j] - L[j - 2]);
      out.d1[j] = s * (2.0 * j - 1.0) * L[j - 1];
      out.d2[j] = s * (2.0 * j - 1.0) * dL[j - 1];
    }
  }
};

}  // namespace viscac::fem1d
