#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sobolev/constants.hpp"
#include "sobolev/geometry.hpp"

using namespace sobolev;
using namespace sobolev::geometry;

TEST_CASE("instanton profile") {
  const Instanton unit{5, 1.0, 0.0};
  CHECK(instanton_profile(unit, 0.0).value == 1.0);
  CHECK(instanton_profile(unit, 0.0).radial_derivative == 0.0);
  // U ~ k^{(N-2)/2} r^{2-N} far out
  const double r = 1e4;
  CHECK(instanton_profile(unit, r).value * std::pow(r, 3) == doctest::Approx(std::pow(15.0, 1.5)).epsilon(1e-6));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double eps = std::pow(10.0, -3 + 3 * u(rng)), x = 5 * u(rng);
    const double lhs = instanton_profile({6, eps, 0.0}, x).value;
    const double rhs = std::pow(eps, -2.0) * instanton_profile({6, 1.0, 0.0}, x / eps).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    // derivative against a central difference
    const double h = 1e-6 * eps;
    const double fd = (instanton_profile({6, eps, 0.0}, x + h).value - instanton_profile({6, eps, 0.0}, x - h).value) /
                      (2 * h);
    CHECK(instanton_profile({6, eps, 0.0}, x).radial_derivative == doctest::Approx(fd).epsilon(1e-5).scale(lhs / eps));
  }
}

TEST_CASE("cap density") {
  const BallDomain dom{5, 1.0};
  const double omega = constants::sphere_area(5);
  CHECK(cap_density(dom, 0.0, 0.5) == doctest::Approx(omega * std::pow(0.5, 4)).epsilon(1e-14));
  CHECK(cap_density(dom, 0.0, 1.5) == 0.0);
  CHECK(cap_density(dom, 1.0, 2.0) == 0.0);

  // Boundary point: the cap is cos φ ≥ r/(2R).
  const double sigma = 2 * std::pow(std::numbers::pi, 2.0) / std::tgamma(2.0);  // |S^3|
  for (double r : {0.1, 0.7, 1.3, 1.9}) {
    const double phi = std::acos(r / 2.0);
    const double polar = (2.0 - 3.0 * std::cos(phi) + std::pow(std::cos(phi), 3)) / 3.0;  // ∫_0^φ sin³
    CHECK(cap_density(dom, 1.0, r) == doctest::Approx(std::pow(r, 4) * sigma * polar).epsilon(1e-12));
  }
}

TEST_CASE("radial integrals reproduce volumes and moments") {
  const numerics::QuadratureSpec spec;
  for (int N : {5, 6, 8}) {
    for (double R : {0.5, 1.0, 3.0}) {
      const BallDomain dom{N, R};
      for (double rho : {0.0, 0.3 * R, R}) {
        const double vol = ball_radial_integral(dom, rho, [](double) { return 1.0; }, spec);
        CHECK(vol == doctest::Approx(dom.volume()).epsilon(1e-11));
        // ∫_B |x - P|² dx = |B| (N R²/(N+2) + |P|²)
        const double second = ball_radial_integral(dom, rho, [](double r) { return r * r; }, spec);
        CHECK(second == doctest::Approx(dom.volume() * (N * R * R / (N + 2.0) + rho * rho)).epsilon(1e-11));
      }
    }
  }
  const BallDomain unit{5, 1.0};
  CHECK(ball_radial_integral(unit, 0.0, [](double r) { return r * r; }, spec) ==
        doctest::Approx(constants::sphere_area(5) / 7).epsilon(1e-13));
  CHECK_THROWS_AS(ball_radial_integral(unit, 1.5, [](double) { return 1.0; }, spec), DomainError);
}

TEST_CASE("boundary instanton on a large ball sees half the mass") {
  const numerics::QuadratureSpec spec;
  const int N = 5;
  const double two_star = 10.0 / 3;
  const double half = constants::sobolev_constant_pow(N) / 2;
  double prev_gap = 1.0;
  for (double R : {1e1, 1e2, 1e3}) {
    const BallDomain dom{N, R};
    const Instanton inst{N, 1.0, R};
    const auto hints = concentration_hints(1.0, 2 * R);
    const double mass = ball_radial_integral(
        dom, R, [&](double r) { return std::pow(instanton_profile(inst, r).value, two_star); }, spec, hints);
    const double gap = std::abs(mass / half - 1.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-2);
}

TEST_CASE("instanton norms") {
  const numerics::QuadratureSpec spec;
  const int N = 5;
  const BallDomain dom{N, 1.0};
  // Interior concentration keeps the full energy.
  const auto inner = instanton_norms(dom, {N, 1e-3, 0.0}, 2.5, spec);
  CHECK(inner.grad_sq == doctest::Approx(constants::sobolev_constant_pow(N)).epsilon(1e-6));
  CHECK(std::pow(inner.crit_norm, 10.0 / 3) == doctest::Approx(constants::sobolev_constant_pow(N)).epsilon(1e-6));

  // Boundary concentration: β₀ approaches S/2^{2/N} from below.
  const double thr = std::pow(constants::sobolev_constant_pow(N), 0.4) * std::pow(2.0, -0.4);
  double prev = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const auto n = instanton_norms(dom, {N, eps, 1.0}, 2.5, spec);
    const double beta0 = n.grad_sq / (n.crit_norm * n.crit_norm);
    CHECK(beta0 < thr);
    CHECK(beta0 > prev);
    prev = beta0;
  }
  CHECK(prev == doctest::Approx(thr).epsilon(1e-2));
}
