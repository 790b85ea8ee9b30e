#pragma once

#include <algorithm>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "banded.hpp"
#include "basis.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"

namespace viscac::fem1d {

// Degrees of freedom for a set of fields on one mesh. Continuous fields
// share vertex unknowns between neighbouring elements; discontinuous fields
// are purely element-local. Unknowns are numbered element by element so the
// system matrix is banded.
class DofMap {
 public:
  DofMap() = default;
  DofMap(const Mesh1D& mesh, std::vector<Basis1D> fields) : fields_(std::move(fields)) {
    const int ne = mesh.n_elements();
    const int nf = int(fields_.size());
    vertex_.assign(nf, std::vector<int>(ne + 1, -1));
    local_.assign(ne, {});
    int next = 0;
    for (int f = 0; f < nf; ++f)
      if (fields_[f].continuous()) vertex_[f][0] = next++;
    std::vector<std::vector<int>> interior(nf);
    for (int e = 0; e < ne; ++e) {
      for (int f = 0; f < nf; ++f) {
        interior[f].clear();
        const int first = fields_[f].continuous() ? 2 : 0;
        for (int j = first; j < fields_[f].size(); ++j) interior[f].push_back(next++);
      }
      for (int f = 0; f < nf; ++f)
        if (fields_[f].continuous()) vertex_[f][e + 1] = next++;
      auto& loc = local_[e];
      for (int f = 0; f < nf; ++f) {
        if (fields_[f].continuous()) {
          loc.push_back(vertex_[f][e]);
          loc.push_back(vertex_[f][e + 1]);
        }
        loc.insert(loc.end(), interior[f].begin(), interior[f].end());
      }
    }
    n_ = next;
    bandwidth_ = 0;
    for (const auto& loc : local_) {
      const auto [lo, hi] = std::minmax_element(loc.begin(), loc.end());
      bandwidth_ = std::max(bandwidth_, *hi - *lo);
    }
  }

  int size() const { return n_; }
  int bandwidth() const { return bandwidth_; }
  int n_fields() const { return int(fields_.size()); }
  const Basis1D& field(int f) const { return fields_[f]; }
  const std::vector<int>& element_dofs(int e) const { return local_[e]; }
  // Offset of field f inside an element's local dof list.
  int local_offset(int f) const {
    int o = 0;
    for (int g = 0; g < f; ++g) o += fields_[g].size();
    return o;
  }
  // Vertex unknown of a continuous field at mesh node i.
  int vertex_dof(int f, int node) const {
    if (!fields_[f].continuous()) throw std::logic_error("vertex dof of discontinuous field");
    return vertex_[f][node];
  }

  BandedComplexMatrix make_matrix() const { return BandedComplexMatrix(n_, bandwidth_, bandwidth_); }

 private:
  std::vector<Basis1D> fields_;
  std::vector<std::vector<int>> vertex_;
  std::vector<std::vector<int>> local_;
  int n_ = 0;
  int bandwidth_ = 0;
};

// Value and first two physical derivatives of a scalar field.
struct Jet {
  cplx v{}, d1{}, d2{};
};

// A discrete solution: coefficients over a DofMap on a mesh.
struct FeFunction {
  Mesh1D mesh;
  DofMap dofs;
  std::vector<cplx> coef;

  Jet eval(int field, double y) const {
    const int e = mesh.locate(y);
    return eval_in(field, e, mesh.to_reference(e, y));
  }

  Jet eval_in(int field, int e, double xi) const {
    ShapeValues sv;
    const auto& basis = dofs.field(field);
    basis.eval(xi, sv);
    const auto& loc = dofs.element_dofs(e);
    const int off = dofs.local_offset(field);
    const double J = 2.0 / mesh.h(e);
    Jet r;
    for (int j = 0; j < basis.size(); ++j) {
      const cplx c = coef[loc[off + j]];
      r.v += c * sv.v[j];
      r.d1 += c * sv.d1[j] * J;
      r.d2 += c * sv.d2[j] * J * J;
    }
    return r;
  }
};

// Quadrature points per element: p + 2 for polynomial integrands, doubled
// when the integrand carries non-polynomial data.
inline int quadrature_points(int degree, bool nonpolynomial) {
  return nonpolynomial ? 2 * (degree + 2) : degree + 2;
}

// Entry (i, j) = int weight D^a phi_j D^b phi_i over the mesh, single
// continuous scalar field.
inline BandedComplexMatrix assemble(const Mesh1D& mesh, const Basis1D& basis,
                                    const std::function<cplx(double)>& weight, int a, int b,
                                    int qpoints = 0) {
  if (a < 0 || a > 1 || b < 0 || b > 1) throw std::invalid_argument("derivative order must be 0 or 1");
  DofMap dm(mesh, {basis});
  auto A = dm.make_matrix();
  const auto& q = gauss_legendre(qpoints > 0 ? qpoints : 2 * basis.degree + 2);
  ShapeValues sv;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& loc = dm.element_dofs(e);
    const double J = 2.0 / mesh.h(e);
    for (std::size_t iq = 0; iq < q.x.size(); ++iq) {
      basis.eval(q.x[iq], sv);
      const double y = mesh.from_reference(e, q.x[iq]);
      const cplx w = weight(y) * q.w[iq] * mesh.h(e) * 0.5;
      for (int i = 0; i < basis.size(); ++i) {
        const double ti = b ? sv.d1[i] * J : sv.v[i];
        for (int j = 0; j < basis.size(); ++j) {
          const double tj = a ? sv.d1[j] * J : sv.v[j];
          A.add(loc[i], loc[j], w * tj * ti);
        }
      }
    }
  }
  return A;
}

}  // namespace viscac::fem1d
