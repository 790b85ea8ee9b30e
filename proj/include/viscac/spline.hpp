#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <vector>

namespace viscac {

// Natural cubic spline through (x_i, y_i); x strictly increasing.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const int n = int(x_.size());
    if (n < 3 || int(y_.size()) != n) throw std::invalid_argument("spline needs >= 3 matching samples");
    for (int i = 1; i < n; ++i)
      if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("spline abscissae must increase");
    // Tridiagonal system for second derivatives, natural end conditions.
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
      const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
      const double a = h0 / 6, b = (h0 + h1) / 3, cc = h1 / 6;
      const double r = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
      const double den = b - a * c[i - 1];
      c[i] = cc / den;
      d[i] = (r - a * d[i - 1]) / den;
    }
    for (int i = n - 2; i >= 1; --i) m_[i] = d[i] - c[i] * m_[i + 1];
  }

  double lower() const { return x_.front(); }
  double upper() const { return x_.back(); }

  // Value, first and second derivative.
  std::array<double, 3> jet(double t) const {
    if (t < x_.front() || t > x_.back()) throw std::out_of_range("spline evaluated outside its data range");
    int i = int(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin()) - 1;
    i = std::clamp(i, 0, int(x_.size()) - 2);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - t) / h, B = (t - x_[i]) / h;
    const double v = A * y_[i] + B * y_[i + 1] + ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6;
    const double d1 = (y_[i + 1] - y_[i]) / h + (-(3 * A * A - 1) * m_[i] + (3 * B * B - 1) * m_[i + 1]) * h / 6;
    const double d2 = A * m_[i] + B * m_[i + 1];
    return {v, d1, d2};
  }

 private:
  std::vector<double> x_, y_, m_;
};

}  // namespace viscac
