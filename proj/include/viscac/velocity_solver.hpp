#pragma once

#include <array>
#include <vector>

#include "fem1d/space.hpp"
#include "geometry.hpp"
#include "modal.hpp"
#include "params.hpp"
#include "sources.hpp"

namespace viscac {

// Velocity model per mode:
//   int [alpha D(v) D(v')* - k^2 v.v'*] w dy - sum_walls w_b lambda (v'.n)* = -int G.v'* w dy
//   v.n + (beta_v/alpha) |sigma|^2 lambda = R   on each wall
// with G = i omega/(rho0 c^2) f [+ eta/(rho0^2 c^2) curl curl f for order 2],
// beta_v = (c^2/omega^2) beta and R = -(i beta/(rho0 omega)) d/dt(f . n_perp).
// The wall relation is scalar per mode, so lambda is eliminated before the
// solve. Where it degenerates (order 0, or a mode with zero tangential
// symbol) it reads v.n = R and is imposed as an essential condition.
//
// v_n is continuous of degree p, v_t discontinuous of degree p-1: the 1D
// analogue of a Raviart-Thomas pair.
struct MixedModalSolution {
  int k = 0;
  int order = 0;
  int degree = 0;
  MaterialParams params;
  SeparableGeometry geom{StripTorus{}};
  cplx alpha{1.0, 0.0};
  fem1d::FeFunction u;  // field 0: v_t, field 1: v_n
  std::array<cplx, 2> lambda{};
  SolveInfo info;

  struct Local {
    fem1d::Jet vt, vn;
    cplx D, dD;
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
    return r;
  }

  ModalVector velocity(double y) const {
    const auto l = local(y);
    return {l.vt.v, l.vn.v};
  }
  cplx divergence(double y) const { return local(y).D; }

  // True scalar curl of the mode.
  cplx curl(double y) const {
    const auto l = local(y);
    const cplx C = l.vt.d1 + geom.c(y) * l.vt.v - geom.a(k, y) * l.vn.v;
    return -double(geom.handedness()) * C;
  }

  cplx pressure_factor() const { return -I * params.rho0 * params.c * params.c / params.omega; }

  FieldSample sample(double y) const {
    const auto l = local(y);
    const cplx s = pressure_factor();
    return {s * l.D, s * l.dD, l.vt.v, l.vn.v, l.D};
  }
};

inline ModalVector velocity_load(const SeparableGeometry& g, const MaterialParams& p, int order,
                                 const ModalSource& ms, double y) {
  auto G = curlcurl_iterate(g, p, ms, 0, y);
  if (order == 2) {
    const double e2 = 2.0 * p.eta / (p.omega * p.rho0);
    const auto M2 = curlcurl_iterate(g, p, ms, 2, y);
    G.t += e2 * M2.t;
    G.n += e2 * M2.n;
  }
  return G;
}

inline MixedModalSolution solve_velocity_mode(const MaterialParams& params, const SeparableGeometry& geom,
                                              ModelOrder order, const ModalSource& ms,
                                              const fem1d::Mesh1D& mesh, int degree) {
  params.validate();
  using namespace fem1d;
  if (degree < 1) throw std::invalid_argument("velocity solver needs degree >= 1");
  if (std::abs(mesh.a() - geom.lower()) > 1e-12 || std::abs(mesh.b() - geom.upper()) > 1e-12)
    throw std::invalid_argument("mesh does not span the wall-normal interval");
  const int N = order.value();
  DofMap dm(mesh, {Basis1D(degree - 1, BasisKind::Legendre), Basis1D(degree)});
  auto A = dm.make_matrix();
  std::vector<cplx> rhs(dm.size());
  const int nq = quadrature_points(degree, true);
  detail::ReferenceTables tab(dm, nq);
  const int nt = degree, nloc = 2 * degree + 1;
  detail::LocalSystem loc(nloc);
  std::vector<cplx> Fvt(nloc), Fvn(nloc), FD(nloc);
  const cplx alpha = volume_alpha(params, order);
  const double k2 = params.wavenumber_sq();

  for (int e = 0; e < mesh.n_elements(); ++e) {
    loc.clear();
    const double J = 2.0 / mesh.h(e);
    for (std::size_t q = 0; q < tab.q->x.size(); ++q) {
      const double y = mesh.from_reference(e, tab.q->x[q]);
      const double w = tab.q->w[q] * 0.5 * mesh.h(e) * geom.weight(y);
      const cplx a = geom.a(ms.k, y);
      const double c = geom.c(y);
      const auto& st = tab.shapes[0][q];
      const auto& sn = tab.shapes[1][q];
      for (int j = 0; j < nt; ++j) Fvt[j] = st.v[j], Fvn[j] = 0, FD[j] = a * st.v[j];
      for (int j = 0; j <= degree; ++j) {
        Fvt[nt + j] = 0;
        Fvn[nt + j] = sn.v[j];
        FD[nt + j] = sn.d1[j] * J + c * sn.v[j];
      }
      loc.add_feature(FD, w * alpha);
      loc.add_feature(Fvt, -w * k2);
      loc.add_feature(Fvn, -w * k2);
      const auto G = velocity_load(geom, params, N, ms, y);
      loc.add_load(Fvt, -w * G.t);
      loc.add_load(Fvn, -w * G.n);
    }
    loc.scatter(dm.element_dofs(e), A, rhs);
  }

  struct WallElim {
    bool essential;
    cplx R, coef;  // lambda = coef (R - nu v_n) when !essential
  };
  std::array<WallElim, 2> elim{};
  for (int i = 0; i < 2; ++i) {
    const auto b = geom.boundaries()[i];
    const int node = b.id == Wall::Lower ? 0 : mesh.n_elements();
    const int dof = dm.vertex_dof(1, node);
    const cplx sig = tangential_symbol(geom, b.id, ms.k);
    const double nu = b.normal_sign;
    if (N == 0 || std::norm(sig) == 0.0) {
      elim[i] = {true, 0.0, 0.0};
      A.constrain(dof, 0.0, rhs);
      continue;
    }
    const cplx beta = wall_beta(params, order, b.kappa);
    const cplx beta_v = beta / k2;
    const auto tr = boundary_traces(geom, ms, b.id);
    const cplx R = -I * beta / (params.rho0 * params.omega) * tr.d_f_nperp;
    const cplx coef = alpha / (beta_v * std::norm(sig));
    const double rw = geom.weight(b.coord);
    elim[i] = {false, R, coef};
    A.add(dof, dof, rw * coef);
    rhs[dof] += rw * coef * nu * R;
  }

  BandedLU lu(std::move(A));
  MixedModalSolution sol;
  sol.k = ms.k;
  sol.order = N;
  sol.degree = degree;
  sol.params = params;
  sol.geom = geom;
  sol.alpha = alpha;
  sol.u = FeFunction{mesh, dm, lu.solve(rhs)};
  sol.info = {lu.min_pivot(), lu.norm(), dm.size()};
  for (int i = 0; i < 2; ++i) {
    const auto b = geom.boundaries()[i];
    if (elim[i].essential) {
      sol.lambda[i] = alpha * sol.divergence(b.coord);
    } else {
      const cplx vn = sol.u.eval(1, b.coord).v;
      sol.lambda[i] = elim[i].coef * (elim[i].R - double(b.normal_sign) * vn);
    }
  }
  return sol;
}

// p = -i rho0 c^2/omega div v with its wall-normal derivative.
inline fem1d::Jet pressure_from_velocity(const MixedModalSolution& sol, double y) {
  const auto l = sol.local(y);
  const cplx s = sol.pressure_factor();
  return {s * l.D, s * l.dD, {}};
}

}  // namespace viscac
