#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace viscac::fem1d {

struct Grading {
  double ratio = 1.0;
  int layers = 0;
  bool lower = false;
  bool upper = false;
};

struct Mesh1D {
  std::vector<double> nodes;
  Grading grading;

  int n_elements() const { return int(nodes.size()) - 1; }
  double a() const { return nodes.front(); }
  double b() const { return nodes.back(); }
  double h(int e) const { return nodes[e + 1] - nodes[e]; }

  double min_size() const {
    double m = h(0);
    for (int e = 1; e < n_elements(); ++e) m = std::min(m, h(e));
    return m;
  }

  // Element containing y; points on an interior node go to the right element.
  int locate(double y) const {
    if (y < a() || y > b()) throw std::out_of_range("point outside mesh");
    auto it = std::upper_bound(nodes.begin(), nodes.end(), y);
    int e = int(it - nodes.begin()) - 1;
    return std::clamp(e, 0, n_elements() - 1);
  }

  double to_reference(int e, double y) const {
    return 2.0 * (y - nodes[e]) / h(e) - 1.0;
  }
  double from_reference(int e, double xi) const {
    return nodes[e] + 0.5 * (xi + 1.0) * h(e);
  }
};

// n_interior uniform elements; the end elements flagged for refinement are
// split geometrically at h r^layers, ..., h r, so the wall element has size
// h r^layers.
inline Mesh1D build_graded_mesh(double a, double b, int n_interior, double ratio, int layers,
                                bool refine_lower = true, bool refine_upper = true) {
  if (!(b > a)) throw std::invalid_argument("degenerate mesh interval");
  if (n_interior < 1) throw std::invalid_argument("n_interior must be >= 1");
  if (layers < 0) throw std::invalid_argument("layers must be >= 0");
  if (layers > 0 && !(ratio > 0 && ratio < 1))
    throw std::invalid_argument("grading ratio must lie in (0,1)");
  const double h = (b - a) / n_interior;
  if (n_interior == 1 && layers > 0 && refine_lower && refine_upper)
    throw std::invalid_argument("cannot grade both ends of a single element");

  std::vector<double> x;
  x.push_back(a);
  if (refine_lower)
    for (int j = layers; j >= 1; --j) x.push_back(a + h * std::pow(ratio, j));
  for (int i = 1; i < n_interior; ++i) x.push_back(a + i * h);
  if (refine_upper)
    for (int j = 1; j <= layers; ++j) x.push_back(b - h * std::pow(ratio, j));
  x.push_back(b);
  std::sort(x.begin(), x.end());
  Mesh1D m;
  m.nodes = std::move(x);
  m.grading = {ratio, layers, refine_lower, refine_upper};
  return m;
}

// Layer count that brings the wall element down to at most target_size.
inline int layers_for(double interval, int n_interior, double ratio, double target_size) {
  const double h = interval / n_interior;
  if (h <= target_size) return 0;
  return int(std::ceil(std::log(target_size / h) / std::log(ratio) - 1e-12));
}

}  // namespace viscac::fem1d
