#include <catch_amalgamated.hpp>

#include <viscac/geometry.hpp>

using namespace viscac;
using Catch::Approx;

TEST_CASE("curvature") {
  const SeparableGeometry strip(StripTorus{1, 1});
  CHECK(curvature(strip, "bottom") == 0.0);
  CHECK(curvature(strip, "top") == 0.0);
  const SeparableGeometry ann(Annulus{0.25, 0.5});
  CHECK(curvature(ann, "outer") == Approx(2.0));
  CHECK(curvature(ann, "inner") == Approx(-4.0));
  CHECK_THROWS_AS(curvature(ann, "top"), std::invalid_argument);
}

TEST_CASE("tangential symbol") {
  const SeparableGeometry strip(StripTorus{1, 1});
  CHECK(std::abs(tangential_symbol(strip, Wall::Lower, 0)) == 0.0);
  CHECK(std::abs(tangential_symbol(strip, Wall::Lower, 1) - 2 * pi * I) < 1e-14);
  // the upper wall runs the other way
  CHECK(std::abs(tangential_symbol(strip, Wall::Upper, 1) + 2 * pi * I) < 1e-14);

  const SeparableGeometry ann(Annulus{0.25, 0.5});
  CHECK(std::abs(tangential_symbol(ann, Wall::Upper, 3) - 6.0 * I) < 1e-14);

  for (const auto& g : {strip, ann})
    for (auto w : {Wall::Lower, Wall::Upper})
      for (int k : {1, 2, 7}) CHECK(std::abs(tangential_symbol(g, w, k) - std::conj(tangential_symbol(g, w, -k))) < 1e-14);
}

TEST_CASE("symbol matches differentiation of the trace along n_perp") {
  // d/dt e^{ik theta} with t the arclength along n_perp, by central differences.
  const SeparableGeometry ann(Annulus{0.3, 0.8});
  for (auto w : {Wall::Lower, Wall::Upper}) {
    const auto b = ann.boundary(w);
    const int k = 3;
    const double th = 0.4, h = 1e-6;
    // t = orientation * r * theta
    const double dth = h / (b.orientation * b.radius);
    const cplx fd = (std::exp(I * double(k) * (th + dth)) - std::exp(I * double(k) * (th - dth))) / (2 * h);
    CHECK(std::abs(fd / std::exp(I * double(k) * th) - tangential_symbol(ann, w, k)) < 1e-6);
  }
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(SeparableGeometry(Annulus{0.5, 0.25}), std::invalid_argument);
  CHECK_THROWS_AS(SeparableGeometry(Annulus{0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SeparableGeometry(StripTorus{-1, 1}), std::invalid_argument);
}

TEST_CASE("local coordinates") {
  const SeparableGeometry strip(StripTorus{1, 1});
  const auto lc = local_coords(strip, Wall::Upper, 0.3, 0.9, 0.01);
  CHECK(lc.s == Approx(0.1));
  CHECK(lc.S == Approx(10.0));
  CHECK_THROWS(local_coords(strip, Wall::Lower, 0.0, -0.1, 0.01));
}

TEST_CASE("cutoff") {
  const SeparableGeometry strip(StripTorus{1, 1});
  const auto c = default_cutoff(strip);
  CHECK_NOTHROW(validate_cutoff(c, strip));
  CHECK(cutoff_eval(c, c.s1 / 2) == 1.0);
  CHECK(cutoff_eval(c, 2 * c.s0) == 0.0);
  CHECK_THROWS(cutoff_eval(c, -0.01));

  SECTION("monotone and within [0,1]") {
    double prev = 1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double v = cutoff_eval(c, c.s0 * 1.2 * i / 1000);
      CHECK(v <= prev + 1e-15);
      CHECK(v >= 0.0);
      prev = v;
    }
  }
  SECTION("derivatives against finite differences") {
    const double h = 1e-6;
    for (double u : {0.1, 0.3, 0.5, 0.77, 0.95}) {
      const double s = c.s1 + u * (c.s0 - c.s1);
      const auto j = cutoff_jet(c, s);
      const double d1 = (cutoff_eval(c, s + h) - cutoff_eval(c, s - h)) / (2 * h);
      const double d2 = (cutoff_jet(c, s + h)[1] - cutoff_jet(c, s - h)[1]) / (2 * h);
      CHECK(j[1] == Approx(d1).margin(1e-5));
      CHECK(j[2] == Approx(d2).margin(1e-3 * std::max(1.0, std::abs(d2))));
    }
  }
  SECTION("support constraints") {
    CHECK_THROWS(validate_cutoff({0.2, 0.1}, strip));
    CHECK_THROWS(validate_cutoff({0.1, 0.6}, strip));
    const SeparableGeometry ann(Annulus{0.25, 0.5});
    // 1/(2 max|kappa|) = 0.125
    CHECK_NOTHROW(validate_cutoff({0.05, 0.1}, ann));
    CHECK_THROWS(validate_cutoff({0.05, 0.13}, ann));
  }
}
