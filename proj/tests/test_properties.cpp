#include <catch_amalgamated.hpp>

#include "oracles/oracles.hpp"
#include "oracles/properties.hpp"

using namespace viscac;

TEST_CASE("curl-free velocity for gradient sources") { CHECK(props::curl_freeness() <= 1e-8); }

TEST_CASE("divergence-free corrector") { CHECK(props::corrector_divergence_defect() <= 1e-9); }

TEST_CASE("dissipative wall form") { CHECK(props::dissipation_sign() < 0); }

TEST_CASE("order 1 degenerates to order 0 at rate sqrt(eta)") {
  const double rate = props::degeneration_rate();
  INFO("rate " << rate);
  CHECK(std::abs(rate - 1.0) <= 0.3);
}

TEST_CASE("modal and direct region norms agree") { CHECK(props::parseval_gap() <= 1e-6); }

// Sources with nonzero wall traces exercise the boundary data of the
// impedance conditions, which the localized reference Gaussian does not.
TEST_CASE("asymptotic order with wall data") {
  for (const auto& cs : {oracle::strip_case(0), oracle::annulus_case(0)}) {
    std::vector<double> x;
    std::array<std::vector<double>, 3> y;
    for (double eta : {1e-4, 3e-5, 1e-5, 3e-6}) {
      MaterialParams p = cs.params;
      p.eta = eta;
      p.eta_prime = 0;
      const Discretization d;
      const auto mesh = make_mesh(cs.geom, p, d);
      const RegionQuadrature rq(cs.geom, AnalysisRegion{0.1}, mesh, 16);
      const auto ms = cs.source();
      const auto se = sample_on(solve_exact_mode(p, cs.geom, ms, mesh, d.degree), rq);
      const auto ref = mode_norms(cs.geom, ms.k, rq, se);
      x.push_back(std::sqrt(eta));
      for (int N = 0; N < 3; ++N) {
        const auto ps = solve_pressure_mode(p, cs.geom, ModelOrder(N), ms, mesh, d.degree);
        const auto e = mode_error_norms(cs.geom, ms.k, rq, se, sample_on(velocity_from_pressure(ps), rq));
        y[N].push_back(std::sqrt(e.p_h1 / ref.p_h1) + std::sqrt(e.v_hdiv / ref.v_hdiv));
      }
    }
    for (int N = 0; N < 3; ++N) {
      const double s = fit_slope(x, y[N]);
      INFO(cs.name << ", order " << N << ": slope " << s);
      CHECK(std::abs(s - (N + 1)) <= 0.3);
    }
  }
}
