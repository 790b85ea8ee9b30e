#include <catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <random>

#include <viscac/fem1d/banded.hpp>
#include <viscac/fem1d/mesh.hpp>
#include <viscac/fem1d/space.hpp>
#include <viscac/params.hpp>

using namespace viscac;
using namespace viscac::fem1d;
using viscac::I;
using viscac::pi;
using Catch::Approx;

namespace {
auto one = [](double) { return cplx(1.0); };
}

TEST_CASE("graded mesh") {
  SECTION("no layers is uniform") {
    const auto m = build_graded_mesh(0, 1, 5, 0.5, 0);
    REQUIRE(m.n_elements() == 5);
    for (int e = 0; e < 5; ++e) CHECK(m.h(e) == Approx(0.2));
  }
  SECTION("geometric refinement at both ends") {
    const auto m = build_graded_mesh(0, 1, 4, 0.5, 3);
    CHECK(m.n_elements() == 4 + 6);
    CHECK(m.min_size() == Approx(0.03125));
    CHECK(m.h(0) == Approx(0.03125));
    CHECK(m.h(m.n_elements() - 1) == Approx(0.03125));
    for (int e = 0; e + 1 < m.n_elements(); ++e) CHECK(m.nodes[e] < m.nodes[e + 1]);
    // consecutive wall elements follow the ratio
    CHECK(m.h(1) / m.h(0) == Approx(1 / 0.5 - 1).margin(1e-12));
  }
  SECTION("one end only") {
    const auto m = build_graded_mesh(0, 2, 4, 0.25, 2, true, false);
    CHECK(m.h(0) == Approx(0.5 * 0.0625));
    CHECK(m.h(m.n_elements() - 1) == Approx(0.5));
  }
  SECTION("bad input") {
    CHECK_THROWS(build_graded_mesh(1, 0, 4, 0.5, 1));
    CHECK_THROWS(build_graded_mesh(0, 1, 0, 0.5, 1));
    CHECK_THROWS(build_graded_mesh(0, 1, 4, 1.5, 1));
  }
  SECTION("layer count reaches the target") {
    const int L = layers_for(1.0, 16, 0.2, 1e-4);
    const auto m = build_graded_mesh(0, 1, 16, 0.2, L);
    CHECK(m.min_size() <= 1e-4);
    CHECK(m.min_size() > 0.2 * 1e-4);
  }
}

TEST_CASE("element matrices") {
  const Mesh1D unit{{0.0, 1.0}, {}};
  const auto M = assemble(unit, Basis1D(1), one, 0, 0);
  CHECK(M(0, 0).real() == Approx(1.0 / 3));
  CHECK(M(0, 1).real() == Approx(1.0 / 6));
  CHECK(M(1, 0).real() == Approx(1.0 / 6));
  CHECK(M(1, 1).real() == Approx(1.0 / 3));
  const auto K = assemble(unit, Basis1D(1), one, 1, 1);
  CHECK(K(0, 0).real() == Approx(1.0));
  CHECK(K(0, 1).real() == Approx(-1.0));
  CHECK(K(1, 1).real() == Approx(1.0));

  // The hats sum to one, so summing the r-weighted mass matrix gives int r dr.
  const Mesh1D ann{{0.25, 0.5}, {}};
  const auto R = assemble(ann, Basis1D(1), [](double r) { return cplx(r); }, 0, 0);
  cplx total = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) total += R(i, j);
  CHECK(total.real() == Approx((0.25 - 0.0625) / 2));
}

TEST_CASE("quadrature") {
  for (int n : {1, 4, 9, 20}) {
    const auto& q = gauss_legendre(n);
    // exact for degree 2n - 1
    double s = 0;
    for (int i = 0; i < n; ++i) s += q.w[i] * std::pow(q.x[i], 2 * n - 2);
    CHECK(s == Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
  }
  CHECK(quadrature_points(12, true) == 28);
}

TEST_CASE("banded solve") {
  SECTION("identity") {
    BandedComplexMatrix A(5, 1, 1);
    for (int i = 0; i < 5; ++i) A.set(i, i, 1.0);
    const std::vector<cplx> b{1, {2, 1}, 3, {0, -4}, 5};
    const auto x = solve_banded(A, b);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(x[i] - b[i]) == 0.0);
  }
  SECTION("2x2 with known inverse") {
    BandedComplexMatrix A(2, 1, 1);
    A.set(0, 0, {2, 1}), A.set(0, 1, 1.0), A.set(1, 0, {0, 1}), A.set(1, 1, 3.0);
    // det = 6 + 3i - i = 6 + 2i
    const cplx det(6, 2);
    const std::vector<cplx> b{1.0, I};
    const auto x = solve_banded(A, b);
    CHECK(std::abs(x[0] - (3.0 * b[0] - 1.0 * b[1]) / det) < 1e-12);
    CHECK(std::abs(x[1] - (-I * b[0] + cplx(2, 1) * b[1]) / det) < 1e-12);
  }
  SECTION("agrees with a dense solve") {
    std::mt19937 rng(7);
    std::normal_distribution<double> nd;
    const int n = 40, kl = 3, ku = 5;
    BandedComplexMatrix A(n, kl, ku);
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
    std::vector<cplx> b(n);
    Eigen::VectorXcd bd(n);
    for (int i = 0; i < n; ++i) {
      for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
        const cplx v(nd(rng), nd(rng));
        A.set(i, j, v);
        D(i, j) = v;
      }
      b[i] = bd(i) = cplx(nd(rng), nd(rng));
    }
    const auto x = solve_banded(A, b);
    const Eigen::VectorXcd xd = D.partialPivLu().solve(bd);
    double err = 0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(x[i] - xd(i)));
    CHECK(err < 1e-10 * xd.cwiseAbs().maxCoeff());
  }
  SECTION("1D Neumann Helmholtz at an eigenvalue is singular") {
    const auto mesh = build_graded_mesh(0, 1, 4, 0.5, 0);
    const Basis1D b(10);
    for (int k : {1, 2, 3}) {
      const double lam = (k * pi) * (k * pi);
      const auto K = assemble(mesh, b, one, 1, 1);
      const auto M = assemble(mesh, b, one, 0, 0);
      BandedComplexMatrix A(K.size(), K.kl(), K.ku());
      for (int i = 0; i < K.size(); ++i)
        for (int j = 0; j < K.size(); ++j)
          if (A.in_band(i, j)) A.set(i, j, K(i, j) - lam * M(i, j));
      std::vector<cplx> rhs(K.size(), 1.0);
      CHECK_THROWS_AS(solve_banded(A, rhs), SingularSystemError);
      // slightly off the eigenvalue it solves
      for (int i = 0; i < K.size(); ++i)
        for (int j = 0; j < K.size(); ++j)
          if (A.in_band(i, j)) A.set(i, j, K(i, j) - (lam + 0.5) * M(i, j));
      CHECK_NOTHROW(solve_banded(A, rhs));
    }
  }
}

TEST_CASE("finite element interpolation of a smooth function") {
  // L2 projection of sin onto degree 8 elements reproduces values and derivatives.
  const auto mesh = build_graded_mesh(0, 2, 3, 0.3, 2);
  const Basis1D basis(8);
  const auto M = assemble(mesh, basis, one, 0, 0);
  DofMap dm(mesh, {basis});
  std::vector<cplx> rhs(dm.size());
  const auto& q = gauss_legendre(20);
  ShapeValues sv;
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (std::size_t i = 0; i < q.x.size(); ++i) {
      basis.eval(q.x[i], sv);
      const double y = mesh.from_reference(e, q.x[i]);
      for (int j = 0; j < basis.size(); ++j)
        rhs[dm.element_dofs(e)[j]] += 0.5 * mesh.h(e) * q.w[i] * std::sin(3 * y) * sv.v[j];
    }
  FeFunction f{mesh, dm, solve_banded(M, rhs)};
  for (double y : {0.0, 0.3, 1.0, 1.7, 2.0}) {
    const auto j = f.eval(0, y);
    CHECK(std::abs(j.v - std::sin(3 * y)) < 1e-7);
    CHECK(std::abs(j.d1 - 3 * std::cos(3 * y)) < 1e-5);
  }
}
