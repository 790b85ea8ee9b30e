#pragma once

#include <string>
#include <vector>

#include "fem1d/space.hpp"
#include "geometry.hpp"
#include "modal.hpp"
#include "params.hpp"
#include "sources.hpp"

namespace viscac {

// Viscous reference model for one mode, pressure eliminated through
// p = -i rho0 c^2/omega div v. Both velocity components are continuous and
// vanish on the walls. Weak form:
//   int [ -i omega rho0 v.v' + a_d D(v) D(v')* + eta C(v) C(v')* ] w dy = int f.v'* w dy
// with a_d = i rho0 c^2/omega + eta + eta', D the modal divergence and C the
// modal curl (up to a sign that does not matter here).
struct ModalExactSolution {
  int k = 0;
  int degree = 0;
  MaterialParams params;
  SeparableGeometry geom{StripTorus{}};
  fem1d::FeFunction u;  // field 0: v_t, field 1: v_n
  SolveInfo info;
  std::vector<std::string> warnings;

  struct Local {
    fem1d::Jet vt, vn;
    cplx D, dD, C, dC;
  };

  Local local(double y) const {
    const int e = u.mesh.locate(y);
    return local_in(e, u.mesh.to_reference(e, y));
  }

  Local local_in(int e, double xi) const {
    Local r;
    r.vt = u.eval_in(0, e, xi);
    r.vn = u.eval_in(1, e, xi);
    const double y = u.mesh.from_reference(e, xi);
    const cplx a = geom.a(k, y), da = geom.da(k, y);
    const double c = geom.c(y), dc = geom.dc(y);
    r.D = a * r.vt.v + r.vn.d1 + c * r.vn.v;
    r.dD = da * r.vt.v + a * r.vt.d1 + r.vn.d2 + dc * r.vn.v + c * r.vn.d1;
    r.C = r.vt.d1 + c * r.vt.v - a * r.vn.v;
    r.dC = r.vt.d2 + dc * r.vt.v + c * r.vt.d1 - da * r.vn.v - a * r.vn.d1;
    return r;
  }

  cplx pressure_factor() const { return -I * params.rho0 * params.c * params.c / params.omega; }

  ModalVector velocity(double y) const {
    const auto l = local(y);
    return {l.vt.v, l.vn.v};
  }
  cplx pressure(double y) const { return pressure_factor() * local(y).D; }

  FieldSample sample(double y) const {
    const auto l = local(y);
    const cplx s = pressure_factor();
    return {s * l.D, s * l.dD, l.vt.v, l.vn.v, l.D};
  }

  // Residual of the momentum equation
  //   -i omega rho0 v + grad p - eta lap v - eta' grad div v - f
  // evaluated pointwise with elementwise derivatives.
  ModalVector strong_residual(double y, const ModalSource& ms) const {
    const auto l = local(y);
    const auto f = ms.value(y);
    const cplx a = geom.a(k, y);
    const cplx ad = I * params.rho0 * params.c * params.c / params.omega + params.eta + params.eta_prime;
    const cplx iwr = -I * params.omega * params.rho0;
    return {iwr * l.vt.v - ad * a * l.D - params.eta * l.dC - f.t,
            iwr * l.vn.v - ad * l.dD + params.eta * a * l.C - f.n};
  }
};

inline ModalExactSolution solve_exact_mode(const MaterialParams& params, const SeparableGeometry& geom,
                                           const ModalSource& ms, const fem1d::Mesh1D& mesh, int degree) {
  params.validate();
  if (std::abs(mesh.a() - geom.lower()) > 1e-12 || std::abs(mesh.b() - geom.upper()) > 1e-12)
    throw std::invalid_argument("mesh does not span the wall-normal interval");
  using namespace fem1d;
  DofMap dm(mesh, {Basis1D(degree), Basis1D(degree)});
  auto A = dm.make_matrix();
  std::vector<cplx> rhs(dm.size());

  const int nq = quadrature_points(degree, true);
  detail::ReferenceTables tab(dm, nq);
  const int nloc = 2 * (degree + 1);
  detail::LocalSystem loc(nloc);
  std::vector<cplx> Fvt(nloc), Fvn(nloc), FD(nloc), FC(nloc);
  const cplx ad = I * params.rho0 * params.c * params.c / params.omega + params.eta + params.eta_prime;
  const cplx mass = -I * params.omega * params.rho0;
  const int off = degree + 1;

  for (int e = 0; e < mesh.n_elements(); ++e) {
    loc.clear();
    const double J = 2.0 / mesh.h(e);
    for (std::size_t q = 0; q < tab.q->x.size(); ++q) {
      const double y = mesh.from_reference(e, tab.q->x[q]);
      const double w = tab.q->w[q] * 0.5 * mesh.h(e) * geom.weight(y);
      const cplx a = geom.a(ms.k, y);
      const double c = geom.c(y);
      const auto& s = tab.shapes[0][q];
      for (int j = 0; j < off; ++j) {
        const double v = s.v[j], d = s.d1[j] * J;
        Fvt[j] = v, Fvn[j] = 0, FD[j] = a * v, FC[j] = d + c * v;
        Fvt[off + j] = 0, Fvn[off + j] = v, FD[off + j] = d + c * v, FC[off + j] = -a * v;
      }
      loc.add_feature(Fvt, w * mass);
      loc.add_feature(Fvn, w * mass);
      loc.add_feature(FD, w * ad);
      loc.add_feature(FC, w * params.eta);
      const auto f = ms.value(y);
      loc.add_load(Fvt, w * f.t);
      loc.add_load(Fvn, w * f.n);
    }
    loc.scatter(dm.element_dofs(e), A, rhs);
  }
  for (int f = 0; f < 2; ++f) {
    A.constrain(dm.vertex_dof(f, 0), 0.0, rhs);
    A.constrain(dm.vertex_dof(f, mesh.n_elements()), 0.0, rhs);
  }

  BandedLU lu(std::move(A));
  ModalExactSolution sol;
  sol.k = ms.k;
  sol.degree = degree;
  sol.params = params;
  sol.geom = geom;
  sol.u = FeFunction{mesh, dm, lu.solve(rhs)};
  sol.info = {lu.min_pivot(), lu.norm(), dm.size()};
  const double eps = epsilon(params);
  const double hw = std::min(mesh.h(0), mesh.h(mesh.n_elements() - 1));
  if (hw > eps) sol.warnings.push_back("boundary layer unresolved: wall element " + std::to_string(hw) +
                                       " exceeds epsilon " + std::to_string(eps));
  return sol;
}

}  // namespace viscac
