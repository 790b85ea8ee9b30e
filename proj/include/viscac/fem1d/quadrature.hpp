#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace viscac::fem1d {

struct QuadratureRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Gauss-Legendre by Newton iteration on P_n, Chebyshev initial guesses.
inline QuadratureRule compute_gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("quadrature needs at least one point");
  QuadratureRule q;
  q.x.resize(n);
  q.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    q.x[i] = -z;
    q.x[n - 1 - i] = z;
    q.w[i] = q.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) q.x[n / 2] = 0.0;
  return q;
}

inline const QuadratureRule& gauss_legendre(int n) {
  static std::mutex m;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

}  // namespace viscac::fem1d
