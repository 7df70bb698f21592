#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "sobolev/numerics.hpp"

using namespace sobolev;
using namespace sobolev::numerics;

TEST_CASE("gamma at known points") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(gamma_fn(3.5) == doctest::Approx(3.3233509704478426).epsilon(1e-14));
  CHECK(gamma_fn(5.0) == 24.0);
  CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
  CHECK_THROWS_AS(gamma_fn(-1.5), DomainError);
}

TEST_CASE("gamma recurrence and agreement with the C library") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> x_dist(0.5, 20.0);
  for (int i = 0; i < 500; ++i) {
    const double x = x_dist(rng);
    CHECK(gamma_fn(x + 1.0) / (x * gamma_fn(x)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gamma_fn(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
    CHECK(log_gamma_fn(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  }
  CHECK(log_gamma_fn(300.0) == doctest::Approx(std::lgamma(300.0)).epsilon(1e-14));
  CHECK(beta_fn(2.5, 1.5) == doctest::Approx(beta_fn(1.5, 2.5)).epsilon(1e-15));
  CHECK(beta_fn(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("quadrature examples") {
  const QuadratureSpec spec;
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0, spec).value == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, kInf, spec).value == doctest::Approx(1.0).epsilon(1e-12));

  // r = √15 √u turns the integral into a Beta integral.
  const double closed = std::pow(15.0, -2.5) * beta_fn(2.5, 2.5) / 2.0;
  IntegrateOptions opts;
  opts.tail = [](double c) { return std::pow(c, -5.0) / 5.0; };  // ∫_c^∞ r^{-6}
  const auto r = integrate([](double x) { return std::pow(x, 4) / std::pow(15.0 + x * x, 5); }, 0.0, kInf, spec, opts);
  CHECK(r.value == doctest::Approx(closed).epsilon(1e-12));
  CHECK(r.tail > 0.0);
}

TEST_CASE("quadrature is linear and the vector form matches the scalar one") {
  const QuadratureSpec spec;
  auto f = [](double x) { return std::sin(3 * x) + x; };
  auto g = [](double x) { return 1.0 / (1.0 + x * x); };
  const double lhs = integrate([&](double x) { return 2 * f(x) - 3 * g(x); }, -1.0, 2.0, spec).value;
  const double rhs = 2 * integrate(f, -1.0, 2.0, spec).value - 3 * integrate(g, -1.0, 2.0, spec).value;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));

  const auto many = integrate_many(
      [&](double x, std::span<double> out) {
        out[0] = f(x);
        out[1] = g(x);
        out[2] = std::sqrt(x + 1.0);
      },
      3, -1.0, 2.0, spec);
  REQUIRE(many.value.size() == 3);
  CHECK(many.value[0] == doctest::Approx(integrate(f, -1.0, 2.0, spec).value).epsilon(1e-13));
  CHECK(many.value[1] == doctest::Approx(std::atan(2.0) + std::atan(1.0)).epsilon(1e-13));
  CHECK(many.value[2] == doctest::Approx(2.0 / 3.0 * std::pow(3.0, 1.5)).epsilon(1e-11));
}

TEST_CASE("quadrature failure carries its best estimate") {
  QuadratureSpec tight;
  tight.max_subdivisions = 3;
  try {
    integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, tight);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(std::isfinite(e.best_estimate()));
    CHECK(e.error_bound() > 0.0);
  }
  QuadratureSpec bad;
  bad.rel_tol = -1;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("root finding") {
  CHECK(find_root([](double x) { return x - 2; }, 0, 5, 1e-14) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(find_root([](double x) { return x * x - 2; }, 0, 2, 1e-14) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK(find_root([](double x) { return std::cos(x); }, 1, 2, 1e-14) ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-13));
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1; }, -1, 1, 1e-12), BracketError);
}

TEST_CASE("minimizer examples") {
  OptimizerSpec spec;
  const std::vector<Bound> free1(1), free2(2);

  auto r1 = minimize([](std::span<const double> x) { return (x[0] - 3) * (x[0] - 3); }, {0.0}, free1, spec);
  CHECK(r1.argmin[0] == doctest::Approx(3.0).epsilon(1e-6));

  auto r2 = minimize([](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; }, {1.0, 1.0}, free2, spec);
  CHECK(std::abs(r2.argmin[0]) < 1e-6);
  CHECK(std::abs(r2.argmin[1]) < 1e-6);

  auto rosen = [](std::span<const double> x) {
    return 100 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1 - x[0]) * (1 - x[0]);
  };
  // Oracle: coarse grid search, then compare.
  double best = 1e300, bx = 0, by = 0;
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; j <= 400; ++j) {
      const double p[2] = {-2.0 + 4.0 * i / 400, -1.0 + 4.0 * j / 400};
      if (rosen(p) < best) best = rosen(p), bx = p[0], by = p[1];
    }
  }
  auto r3 = minimize(rosen, {-1.2, 1.0}, free2, spec);
  CHECK(r3.argmin[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r3.argmin[1] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r3.min <= best + 1e-12);
  CHECK(std::abs(r3.argmin[0] - bx) < 0.02);
  CHECK(std::abs(r3.argmin[1] - by) < 0.02);
}

TEST_CASE("minimizer respects bounds and never worsens the start") {
  OptimizerSpec spec;
  const std::vector<Bound> box{{0.5, 2.0}, {-1.0, 1.0}};
  auto f = [](std::span<const double> x) { return (x[0] + 1) * (x[0] + 1) + std::cos(5 * x[1]); };
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> start{0.5 + 1.5 * u(rng), -1.0 + 2.0 * u(rng)};
    const double f0 = f(start);
    const auto r = minimize(f, start, box, spec);
    CHECK(r.min <= f0);
    CHECK(r.argmin[0] >= 0.5);
    CHECK(r.argmin[0] <= 2.0);
    CHECK(r.argmin[1] >= -1.0);
    CHECK(r.argmin[1] <= 1.0);
    CHECK(r.argmin[0] == doctest::Approx(0.5));
  }
}
