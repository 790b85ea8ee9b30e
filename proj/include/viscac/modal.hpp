#pragma once

#include <vector>

#include "fem1d/space.hpp"
#include "params.hpp"

namespace viscac {

// Everything the error measures need from one mode at one point:
// pressure with its wall-normal derivative, velocity and its divergence.
// The tangential pressure derivative is a(y) p.
struct FieldSample {
  cplx p{}, dp{};
  cplx vt{}, vn{};
  cplx div{};
};

struct SolveInfo {
  double min_pivot = 0;
  double norm = 0;
  int n_dofs = 0;
};

namespace detail {

// Shape tables at the reference quadrature points, one per field.
struct ReferenceTables {
  const fem1d::QuadratureRule* q = nullptr;
  std::vector<std::vector<fem1d::ShapeValues>> shapes;  // [field][point]

  ReferenceTables(const fem1d::DofMap& dm, int nq) : q(&fem1d::gauss_legendre(nq)) {
    shapes.resize(dm.n_fields());
    for (int f = 0; f < dm.n_fields(); ++f) {
      shapes[f].resize(q->x.size());
      for (std::size_t i = 0; i < q->x.size(); ++i) dm.field(f).eval(q->x[i], shapes[f][i]);
    }
  }
};

// Adds the local matrix sum_q w_q sum_m coef_m F_m(j) conj(F_m(i)) for
// precomputed feature rows F (features x local dofs).
struct LocalSystem {
  int n = 0;
  std::vector<cplx> A, b;
  explicit LocalSystem(int size) : n(size), A(std::size_t(size) * size), b(size) {}
  void clear() {
    std::fill(A.begin(), A.end(), cplx{});
    std::fill(b.begin(), b.end(), cplx{});
  }
  void add_feature(const std::vector<cplx>& F, cplx coef) {
    for (int i = 0; i < n; ++i) {
      if (F[i] == cplx{}) continue;
      const cplx ci = coef * std::conj(F[i]);
      for (int j = 0; j < n; ++j) A[std::size_t(i) * n + j] += ci * F[j];
    }
  }
  void add_load(const std::vector<cplx>& F, cplx data) {
    for (int i = 0; i < n; ++i) b[i] += data * std::conj(F[i]);
  }
  void scatter(const std::vector<int>& dofs, fem1d::BandedComplexMatrix& M, std::vector<cplx>& rhs) const {
    for (int i = 0; i < n; ++i) {
      rhs[dofs[i]] += b[i];
      for (int j = 0; j < n; ++j) {
        const cplx v = A[std::size_t(i) * n + j];
        if (v != cplx{}) M.add(dofs[i], dofs[j], v);
      }
    }
  }
};

}  // namespace detail
}  // namespace viscac
