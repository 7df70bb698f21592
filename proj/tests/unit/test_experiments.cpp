#include <cmath>

#include "doctest.h"
#include "sobolev/experiments.hpp"

using namespace sobolev;
using namespace sobolev::experiments;
using constants::QKeyword;

namespace {
const numerics::QuadratureSpec kSpec;
const numerics::OptimizerSpec kOpt{1e-6, 1e-10, 400, 2};
}  // namespace

TEST_CASE("geometric grids and grid validation") {
  const auto g = geometric_grid(0.1, 4);
  REQUIRE(g.size() == 4);
  CHECK(g[3] == doctest::Approx(0.0125));
  const auto e = constants::make_exponents(5, QKeyword::two_flat);
  CHECK_THROWS_AS(appendix_sweep({5, 1.0}, e, {0.5, 0.25}, kSpec), DomainError);
  CHECK_THROWS_AS(appendix_sweep({5, 1.0}, e, {0.01, 0.02}, kSpec), DomainError);
}

TEST_CASE("appendix asymptotics") {
  const auto grid = geometric_grid(0.064, 7);
  for (auto kw : {QKeyword::two_sharp, QKeyword::midpoint, QKeyword::two_flat}) {
    const auto e = constants::make_exponents(5, kw);
    const auto r = appendix_sweep({5, 1.0}, e, grid, kSpec);
    CHECK(r.sweep.expected_coefficient == doctest::Approx(constants::instanton_qnorm_closed_form(5, e.q) / 2));
    CHECK(r.sweep.eps_values.back() == doctest::Approx(1e-3));
    CHECK(r.sweep.scaled.back() == doctest::Approx(r.sweep.expected_coefficient).epsilon(0.02));
    CHECK(r.sweep.fitted_coefficient == doctest::Approx(r.sweep.expected_coefficient).epsilon(1e-3));
    CHECK(r.remainder_bounded);
  }
}

TEST_CASE("curvature slope scales with the mean curvature") {
  const auto grid = geometric_grid(0.1, 8);
  const auto r1 = curvature_slope({5, 1.0}, grid, kSpec);
  const auto r2 = curvature_slope({5, 2.0}, grid, kSpec);
  CHECK(r1.intercept_rel_error < 1e-2);
  CHECK(r2.sweep.fitted_coefficient == doctest::Approx(r1.sweep.fitted_coefficient / 2).epsilon(0.05));
  // The measured slope carries the concentration length √(N(N-2)) of U.
  CHECK(r1.concentration_scale == doctest::Approx(std::sqrt(15.0)));
  CHECK(r1.sweep.fitted_coefficient ==
        doctest::Approx(std::sqrt(15.0) * r1.sweep.expected_coefficient).epsilon(0.05));
  CHECK(r1.normalized_slope == doctest::Approx(r1.sweep.expected_coefficient).epsilon(0.05));
}

TEST_CASE("calculus inequality sampling") {
  for (int N = 5; N <= 8; ++N) {
    for (auto kw : {QKeyword::two_sharp, QKeyword::midpoint, QKeyword::two_flat}) {
      const auto e = constants::make_exponents(N, kw);
      const auto r = calculus_lemma_check(e.q, e.t, 100000, 9);
      CHECK(r.pass);
      CHECK(r.violations == 0);
      CHECK(r.worst_margin >= -1e-12);
      CHECK(r.samples >= 100000);
    }
  }
  const auto e = constants::make_exponents(6, QKeyword::midpoint);
  const auto a = calculus_lemma_check(e.q, e.t, 5000, 77);
  const auto b = calculus_lemma_check(e.q, e.t, 5000, 77);
  CHECK(a.worst_margin == b.worst_margin);
  CHECK(a.worst_x == b.worst_x);
  // x = 0 is an equality case and is always probed.
  CHECK(a.worst_margin == 0.0);
  CHECK_THROWS_AS(calculus_lemma_check(e.q, e.t, 0, 1), DomainError);
}

TEST_CASE("eigenfunction residuals") {
  const auto r = eigen_residuals(512, 50.0, 5);
  CHECK(r.res_U <= 1e-4);
  CHECK(r.res_dU <= 1e-3);
  CHECK(r.order_U == doctest::Approx(2.0).epsilon(0.1));
  CHECK(r.order_dU == doctest::Approx(2.0).epsilon(0.1));
  // The uniform mesh is still second order, just with a larger constant.
  const auto [u1, d1] = eigen_residual_max(256, 50.0, 5, 0.0);
  CHECK(r.res_U_uniform == doctest::Approx(u1 / 4).epsilon(0.05));
  CHECK(r.res_dU_uniform == doctest::Approx(d1 / 4).epsilon(0.05));
  CHECK_THROWS_AS(eigen_residuals(8, 50.0, 5), DomainError);
}

TEST_CASE("trial family members") {
  const geometry::BallDomain dom{5, 1.0};
  const auto e = constants::make_exponents(5, QKeyword::two_flat);
  const auto constant = family_member(dom, e, 1.0, std::log(0.1), 1.0);
  CHECK(constant.c == 0.0);
  CHECK(constant.d == doctest::Approx(std::pow(constants::sobolev_constant_pow(5) / (2 * dom.volume()), 0.3)));
  const auto pure = family_member(dom, e, 1.0, std::log(0.1), 0.0);
  CHECK(pure.d == 0.0);
  CHECK(pure.c == 1.0);
  CHECK(pure.inst.eps == doctest::Approx(0.1));
  CHECK(pure.inst.center_dist == dom.R);
}

TEST_CASE("strict gap below the boundary threshold") {
  const auto e = constants::make_exponents(5, QKeyword::two_flat);
  const auto g = s0_gap({5, 1.0}, e, 1.0, kOpt, kSpec);
  CHECK(g.s0_estimate > 0.0);
  CHECK(g.relative_gap > 1e-3);
  CHECK(g.s0_estimate <= g.instanton_only_min);
  CHECK(g.threshold == doctest::Approx(fields::threshold(5)));
}

TEST_CASE("alpha_0 lower bounds") {
  const auto e = constants::make_exponents(5, QKeyword::two_flat);
  const geometry::BallDomain dom{5, 1.0};
  const auto r = estimate_alpha0(dom, e, 1.0, kOpt, kSpec, {0.0, 1.0, 4.0}, {}, false);
  const double B = constants::instanton_qnorm_closed_form(5, e.q);
  CHECK(r.lb_curvature == doctest::Approx(std::pow(2.0, e.t) * constants::sobolev_constant_pow(5) *
                                          constants::curvature_coefficient(5) / std::pow(B, e.t)));
  REQUIRE(r.lb_constant_test.has_value());
  CHECK(r.lb_variational >= *r.lb_constant_test * (1 - 1e-9));
  CHECK(r.lb_variational >= r.lb_curvature * (1 - 1e-2));
  CHECK(r.s_alpha_monotone);
  CHECK(r.s_alpha_curve.size() == 3);
}
