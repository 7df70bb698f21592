#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "doctest.h"
#include "sobolev/constants.hpp"

using namespace sobolev;
using namespace sobolev::constants;

TEST_CASE("exponents at the endpoints are exact") {
  const auto lo = make_exponents(5, QKeyword::two_sharp);
  CHECK(lo.q == 2.5);
  CHECK(lo.s == 0.0);
  CHECK(lo.t == 0.8);
  const auto hi = make_exponents(5, QKeyword::two_flat);
  CHECK(hi.q == doctest::Approx(8.0 / 3).epsilon(1e-15));
  CHECK(hi.s == 1.0);
  CHECK(hi.t == 1.0);
  const auto mid = make_exponents(6, QKeyword::midpoint);
  CHECK(mid.q == doctest::Approx(0.5 * (mid.two_sharp + mid.two_flat)));
}

TEST_CASE("exponent identities on random draws") {
  const auto e = make_exponents(5, 2.6);
  CHECK(e.q * e.t == doctest::Approx(2 * e.s / 3 + 2).epsilon(1e-14));

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(5, 14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const int N = dim(rng);
    const double n = N;
    const double lo = 2 * n / (n - 1), hi = 2 * (n - 1) / (n - 2);
    const auto x = make_exponents(N, lo + (hi - lo) * u(rng));
    CHECK(std::abs(x.q * x.t - (2 * x.s / (n - 2) + 2)) < 1e-13);
    CHECK(std::abs(x.s - (n - 1) * (x.q - x.two_sharp) / (x.two_star - x.q)) < 1e-13);
    CHECK(std::abs(x.t - (x.s / n + (n - 1) / n)) < 1e-13);
    CHECK(x.s >= 0.0);
    CHECK(x.s <= 1.0);
  }
}

TEST_CASE("exponent range and dimension errors") {
  try {
    make_exponents(5, 9.9);
    FAIL("expected RangeError");
  } catch (const RangeError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("2.5") != std::string::npos);
    CHECK(msg.find("2.66666") != std::string::npos);
  }
  CHECK_THROWS_AS(make_exponents(5, 2.4), RangeError);
  CHECK_THROWS_AS(make_exponents(4, QKeyword::two_flat), DomainError);
  const auto low = make_exponents(4, QKeyword::two_flat, {true});
  CHECK(low.theory_out_of_range);
  CHECK_FALSE(make_exponents(5, QKeyword::two_flat).theory_out_of_range);
  CHECK_THROWS_AS(parse_q_keyword("two_star"), DomainError);
  CHECK(parse_q_keyword(to_string(QKeyword::midpoint)) == QKeyword::midpoint);
}

TEST_CASE("closed forms at N = 5") {
  const double pi = std::numbers::pi;
  CHECK(sphere_area(5) == doctest::Approx(8 * pi * pi / 3).epsilon(1e-14));
  CHECK(curvature_coefficient(5) == doctest::Approx(0.8 / std::sqrt(pi) / std::tgamma(1.5)).epsilon(1e-14));
  const double B = std::pow(pi, 2.5) * std::pow(15.0, 2.5) * std::tgamma(1.5) / std::tgamma(4.0);
  CHECK(instanton_qnorm_closed_form(5, 8.0 / 3) == doctest::Approx(B).epsilon(1e-13));
  CHECK_THROWS_AS(curvature_coefficient(3), DomainError);
  // B(q,N) blows up as (N-2)q/2 -> N/2.
  CHECK_THROWS_AS(instanton_qnorm_closed_form(5, 5.0 / 3), DomainError);

  const auto t = closed_form_constants(make_exponents(5, QKeyword::two_flat));
  CHECK(t.threshold == doctest::Approx(t.S * std::pow(2.0, -0.4)).epsilon(1e-15));
  CHECK(std::pow(t.S, 2.5) == doctest::Approx(t.S_pow_N2).epsilon(1e-14));
}

TEST_CASE("closed forms agree with radial quadrature") {
  const numerics::QuadratureSpec spec;
  for (int N : {5, 6, 7, 8}) {
    CHECK(oracle_instanton_energy(N, spec) == doctest::Approx(sobolev_constant_pow(N)).epsilon(1e-8));
    for (auto kw : {QKeyword::two_sharp, QKeyword::two_flat}) {
      const double q = make_exponents(N, kw).q;
      CHECK(oracle_instanton_qnorm(N, q, spec) == doctest::Approx(instanton_qnorm_closed_form(N, q)).epsilon(1e-8));
    }
  }
  // ∫U^{2*} = S^{N/2}
  CHECK(oracle_instanton_qnorm(5, 10.0 / 3, spec) == doctest::Approx(sobolev_constant_pow(5)).epsilon(1e-8));
  CHECK(instanton_qnorm_closed_form(6, 3.0) == doctest::Approx(sobolev_constant_pow(6)).epsilon(1e-12));
}
