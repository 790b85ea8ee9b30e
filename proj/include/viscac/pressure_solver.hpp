#pragma once

#include <array>
#include <vector>

#include "fem1d/space.hpp"
#include "geometry.hpp"
#include "modal.hpp"
#include "params.hpp"
#include "sources.hpp"

namespace viscac {

// Boundary data of one wall in the modal impedance condition
//   alpha dp/dn + beta d^2p/dt^2 = f.n + d/dt(h) + g_extra
// with h = beta (f . n_perp) and g_extra = -(i eta/(omega rho0)) (curl curl f).n
// for order 2 (zero otherwise).
struct PressureWallData {
  BoundaryComponent wall;
  cplx beta{};
  cplx sigma{};     // tangential symbol of the mode on this wall
  cplx f_n{};
  cplx h{};
  cplx g_extra{};
};

struct CanonicalPressureProblem {
  int order = 0;
  int k = 0;
  MaterialParams params;
  SeparableGeometry geom{StripTorus{}};
  cplx alpha{1.0, 0.0};
  std::array<PressureWallData, 2> walls;
  ModalSource source;  // volumic data g = f
};

inline CanonicalPressureProblem build_pressure_problem(const MaterialParams& params,
                                                       const SeparableGeometry& geom, ModelOrder order,
                                                       const ModalSource& ms) {
  params.validate();
  CanonicalPressureProblem P;
  P.order = order.value();
  P.k = ms.k;
  P.params = params;
  P.geom = geom;
  P.alpha = volume_alpha(params, order);
  P.source = ms;
  for (int i = 0; i < 2; ++i) {
    const auto b = geom.boundaries()[i];
    const auto tr = boundary_traces(geom, ms, b.id);
    PressureWallData& d = P.walls[i];
    d.wall = b;
    d.beta = wall_beta(params, order, b.kappa);
    d.sigma = tangential_symbol(geom, b.id, ms.k);
    d.f_n = tr.f_n;
    d.h = d.beta * tr.f_nperp;
    if (order.value() == 2) d.g_extra = -I * params.eta / (params.omega * params.rho0) * tr.curlcurl_n;
  }
  return P;
}

struct ModalPressureSolution {
  CanonicalPressureProblem problem;
  int degree = 0;
  fem1d::FeFunction p;
  SolveInfo info;

  int k() const { return problem.k; }
  int order() const { return problem.order; }

  fem1d::Jet pressure(double y) const { return p.eval(0, y); }

  // Modal residual of the impedance condition on wall i, relative to the
  // size of its terms.
  double boundary_residual(int i) const {
    const auto& d = problem.walls[i];
    const auto pj = p.eval(0, d.wall.coord);
    const cplx lhs = problem.alpha * double(d.wall.normal_sign) * pj.d1 + d.beta * d.sigma * d.sigma * pj.v;
    const cplx rhs = d.f_n + d.sigma * d.h + d.g_extra;
    const double scale = std::abs(problem.alpha * pj.d1) + std::abs(d.beta * d.sigma * d.sigma * pj.v) +
                         std::abs(d.f_n) + std::abs(d.sigma * d.h) + std::abs(d.g_extra);
    return scale > 0 ? std::abs(lhs - rhs) / scale : 0.0;
  }
};

inline ModalPressureSolution solve_pressure_mode(const CanonicalPressureProblem& P, const fem1d::Mesh1D& mesh,
                                                 int degree) {
  using namespace fem1d;
  const auto& geom = P.geom;
  if (std::abs(mesh.a() - geom.lower()) > 1e-12 || std::abs(mesh.b() - geom.upper()) > 1e-12)
    throw std::invalid_argument("mesh does not span the wall-normal interval");
  DofMap dm(mesh, {Basis1D(degree)});
  auto A = dm.make_matrix();
  std::vector<cplx> rhs(dm.size());
  const int nq = quadrature_points(degree, true);
  detail::ReferenceTables tab(dm, nq);
  const int nloc = degree + 1;
  detail::LocalSystem loc(nloc);
  std::vector<cplx> Fp(nloc), Ft(nloc), Fn(nloc);
  const double k2 = P.params.wavenumber_sq();

  for (int e = 0; e < mesh.n_elements(); ++e) {
    loc.clear();
    const double J = 2.0 / mesh.h(e);
    for (std::size_t q = 0; q < tab.q->x.size(); ++q) {
      const double y = mesh.from_reference(e, tab.q->x[q]);
      const double w = tab.q->w[q] * 0.5 * mesh.h(e) * geom.weight(y);
      const cplx a = geom.a(P.k, y);
      const auto& s = tab.shapes[0][q];
      for (int j = 0; j < nloc; ++j) {
        Fp[j] = s.v[j];
        Ft[j] = a * s.v[j];
        Fn[j] = s.d1[j] * J;
      }
      loc.add_feature(Ft, w * P.alpha);
      loc.add_feature(Fn, w * P.alpha);
      loc.add_feature(Fp, -w * k2);
      const auto f = P.source.value(y);
      loc.add_load(Ft, w * f.t);
      loc.add_load(Fn, w * f.n);
    }
    loc.scatter(dm.element_dofs(e), A, rhs);
  }
  // Wall terms: -beta |sigma|^2 p q* on the diagonal; data
  //   -int h d/dt(q*) + int g_extra q*  per unit tangential measure.
  for (int i = 0; i < 2; ++i) {
    const auto& d = P.walls[i];
    const int node = d.wall.id == Wall::Lower ? 0 : mesh.n_elements();
    const int dof = dm.vertex_dof(0, node);
    const double rw = geom.weight(d.wall.coord);
    A.add(dof, dof, -rw * d.beta * std::norm(d.sigma));
    rhs[dof] += rw * (d.g_extra - d.h * std::conj(d.sigma));
  }

  BandedLU lu(std::move(A));
  ModalPressureSolution sol;
  sol.problem = P;
  sol.degree = degree;
  sol.p = FeFunction{mesh, dm, lu.solve(rhs)};
  sol.info = {lu.min_pivot(), lu.norm(), dm.size()};
  return sol;
}

inline ModalPressureSolution solve_pressure_mode(const MaterialParams& params, const SeparableGeometry& geom,
                                                 ModelOrder order, const ModalSource& ms,
                                                 const fem1d::Mesh1D& mesh, int degree) {
  return solve_pressure_mode(build_pressure_problem(params, geom, order, ms), mesh, degree);
}

// Far-field velocity from the pressure:
//   v = i/(rho0 omega) (f - alpha grad p) + [order 2] eta/(rho0^2 omega^2) curl curl f
// together with its modal divergence.
struct PressureRouteVelocity {
  ModalPressureSolution sol;

  FieldSample sample(double y) const {
    const auto& P = sol.problem;
    const auto& g = P.geom;
    const auto& prm = P.params;
    const auto pj = sol.p.eval(0, y);
    const auto fj = P.source.jet(y);
    const cplx a = g.a(P.k, y);
    const double c = g.c(y);
    const cplx s = I / (prm.rho0 * prm.omega);
    FieldSample r;
    r.p = pj.v;
    r.dp = pj.d1;
    r.vt = s * (fj.ft - P.alpha * a * pj.v);
    r.vn = s * (fj.fn - P.alpha * pj.d1);
    const cplx divf = a * fj.ft + fj.dfn + c * fj.fn;
    const cplx lap = a * a * pj.v + pj.d2 + c * pj.d1;
    r.div = s * (divf - P.alpha * lap);
    if (P.order == 2) {
      const auto cc = curlcurl(g, P.source, y);
      const double t = prm.eta / (prm.rho0 * prm.rho0 * prm.omega * prm.omega);
      r.vt += t * cc.v.t;
      r.vn += t * cc.v.n;
      r.div += t * (a * cc.v.t + cc.dn + c * cc.v.n);
    }
    return r;
  }

  ModalVector velocity(double y) const {
    const auto s = sample(y);
    return {s.vt, s.vn};
  }
};

inline PressureRouteVelocity velocity_from_pressure(const ModalPressureSolution& sol) { return {sol}; }

}  // namespace viscac
