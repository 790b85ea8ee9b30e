#include <catch_amalgamated.hpp>

#include <viscac/analysis.hpp>
#include <viscac/sweep.hpp>

using namespace viscac;
using Catch::Approx;

namespace {
const SeparableGeometry unit_strip(StripTorus{1, 1});

struct Scaled {
  const ModalExactSolution* s;
  double f;
  FieldSample sample(double y) const {
    auto v = s->sample(y);
    v.p *= f, v.dp *= f, v.vt *= f, v.vn *= f, v.div *= f;
    return v;
  }
};
}  // namespace

TEST_CASE("region quadrature") {
  MaterialParams p;
  const auto mesh = make_mesh(unit_strip, p, Discretization{});
  const RegionQuadrature rq(unit_strip, AnalysisRegion{0.2}, mesh, 8);
  double len = 0;
  for (double w : rq.w) len += w;
  CHECK(len == Approx(0.6).epsilon(1e-14));
  for (double y : rq.y) CHECK((y > 0.2 && y < 0.8));

  const SeparableGeometry ann(Annulus{0.25, 0.5});
  const auto am = make_mesh(ann, p, Discretization{});
  const RegionQuadrature ra(ann, AnalysisRegion{0.05}, am, 8);
  double area = 0;
  for (double w : ra.w) area += w;
  CHECK(area == Approx((0.45 * 0.45 - 0.3 * 0.3) / 2).epsilon(1e-14));

  CHECK_THROWS(AnalysisRegion{0.6}.interval(unit_strip));
  CHECK_THROWS(AnalysisRegion{0.0}.interval(unit_strip));
}

TEST_CASE("modelling error homogeneity") {
  MaterialParams p;
  const auto src = project_to_modes(GaussianGradient{}, unit_strip, 8);
  const auto mesh = make_mesh(unit_strip, p, Discretization{});
  const RegionQuadrature rq(unit_strip, AnalysisRegion{}, mesh, 16);
  std::vector<ModalExactSolution> ex;
  std::vector<Scaled> same, twice;
  std::vector<int> modes;
  for (int k : {-2, 1, 3}) {
    ex.push_back(solve_exact_mode(p, unit_strip, *src.find(k), mesh, 10));
    modes.push_back(k);
  }
  for (const auto& e : ex) same.push_back({&e, 1.0}), twice.push_back({&e, 2.0});
  const auto z = modelling_error(unit_strip, ex, same, modes, rq);
  CHECK(z.rel_p == 0.0);
  CHECK(z.rel_v == 0.0);
  const auto one = modelling_error(unit_strip, ex, twice, modes, rq);
  CHECK(one.rel_p == Approx(1.0).epsilon(1e-13));
  CHECK(one.rel_v == Approx(1.0).epsilon(1e-13));
  CHECK(one.total() == Approx(2.0).epsilon(1e-13));
  modes.pop_back();
  CHECK_THROWS(modelling_error(unit_strip, ex, same, modes, rq));
}

TEST_CASE("slope fits") {
  const std::vector<double> x{1e-1, 5e-2, 2e-2, 1e-2, 5e-3};
  std::vector<double> sq, cst;
  for (double v : x) sq.push_back(3 * v * v), cst.push_back(0.7);
  CHECK(fit_slope(x, sq) == Approx(2.0).epsilon(1e-12));
  CHECK(fit_slope(x, cst) == Approx(0.0).margin(1e-12));
  CHECK_THROWS(fit_slope(x, sq, 2, 2));

  SECTION("auto window drops a discretization floor") {
    std::vector<double> xs, ys;
    for (int i = 0; i < 8; ++i) {
      const double s = std::pow(10.0, -0.5 * i);
      xs.push_back(s);
      ys.push_back(s * s * s + 1e-9);
    }
    const auto f = fit_slope_auto(xs, ys);
    CHECK(f.stable);
    CHECK(f.first == 0);
    CHECK(f.last < 7);
    CHECK(f.slope == Approx(3.0).margin(0.1));
  }
  SECTION("failed samples break the window") {
    std::vector<double> ys{1, 0.1, std::nan(""), 1e-3, 1e-4, 1e-5};
    std::vector<double> xs{1, 0.1, 0.01, 1e-3, 1e-4, 1e-5};
    const auto f = fit_slope_auto(xs, ys);
    CHECK(f.first == 3);
    CHECK(f.last == 5);
    CHECK(f.slope == Approx(1.0));
  }
  SECTION("a single sample has no slope") {
    const auto f = fit_slope_auto({1e-2}, {0.3});
    CHECK(std::isnan(f.slope));
    CHECK_FALSE(f.stable);
  }
}

TEST_CASE("eigenfrequencies") {
  CHECK(eigenfrequency(2, 2) == Approx(14.0496).epsilon(1e-5));
  CHECK(eigenfrequency(1, 0) == Approx(pi));
  CHECK(eigenfrequency(5, 0) == Approx(15.708).epsilon(1e-4));
  CHECK_THROWS(eigenfrequency(0, 1));
  CHECK(distance_to_resonance(3 * pi) < 1e-12);
  CHECK(distance_to_resonance(15.0) == Approx(5 * pi - 15.0));
  const auto om = omega_samples(2, 17, 61, 0.02);
  CHECK(om.size() >= 55);
  for (double w : om) CHECK(distance_to_resonance(w) >= 0.02);
}

TEST_CASE("error decreases with model order at small viscosity") {
  MaterialParams p;
  p.eta = 1e-4;
  const auto src = project_to_modes(GaussianGradient{}, unit_strip, 64);
  const auto r = run_sample(p, unit_strip, src, Discretization{}, AnalysisRegion{}, {0, 1, 2});
  CHECK(r.orders[2].err.total() <= r.orders[1].err.total());
  CHECK(r.orders[1].err.total() <= r.orders[0].err.total());
}

TEST_CASE("reported error is not a discretization artefact") {
  const auto src = project_to_modes(GaussianGradient{}, unit_strip, 64);
  for (double eta : {1e-3, 1e-4}) {
    MaterialParams p;
    p.eta = eta;
    Discretization lo, hi;
    lo.degree = Discretization{}.degree;
    hi.degree = 2 * lo.degree;
    const auto a = run_sample(p, unit_strip, src, lo, AnalysisRegion{}, {0, 1, 2});
    const auto b = run_sample(p, unit_strip, src, hi, AnalysisRegion{}, {0, 1, 2});
    for (int N = 0; N < 3; ++N) {
      INFO("eta " << eta << ", order " << N);
      CHECK(std::abs(a.orders[N].err.total() / b.orders[N].err.total() - 1) < 0.05);
    }
  }
}
