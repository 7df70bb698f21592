#include "sobolev/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sobolev/constants.hpp"

namespace sobolev::geometry {

void BallDomain::validate() const {
  if (N < 3) throw DomainError("BallDomain: N >= 3 required");
  if (!(R > 0) || !std::isfinite(R)) throw DomainError("BallDomain: radius must be positive");
}

double BallDomain::volume() const {
  return std::pow(std::numbers::pi, 0.5 * N) * std::pow(R, N) / numerics::gamma_fn(0.5 * N + 1.0);
}

void Instanton::validate() const {
  if (!(eps > 0) || !std::isfinite(eps)) throw DomainError("Instanton: eps must be positive");
  if (!(center_dist >= 0)) throw DomainError("Instanton: center distance must be >= 0");
}

ProfileSample instanton_profile(const Instanton& inst, double r) {
  const double n = inst.N;
  const double k = n * (n - 2.0);
  const double x = r / inst.eps;
  const double amp = std::pow(inst.eps, -0.5 * (n - 2.0));
  const double u = std::pow(k / (k + x * x), 0.5 * (n - 2.0));
  const double value = amp * u;
  // d/dr of (k/(k+x²))^{(N-2)/2} = -(N-2) x/(k+x²) U / ε
  const double deriv = -(n - 2.0) * x / (k + x * x) * value / inst.eps;
  return {value, deriv};
}

namespace {

struct CapTables {
  double sigma;       // area of S^{N-2}
  double full_polar;  // ∫_0^π sin^{N-2}
  double omega;       // area of S^{N-1}
};

CapTables cap_tables(int N) {
  const double n = N;
  CapTables t;
  t.sigma = 2.0 * std::pow(std::numbers::pi, 0.5 * (n - 1.0)) / numerics::gamma_fn(0.5 * (n - 1.0));
  t.full_polar = std::sqrt(std::numbers::pi) * numerics::gamma_fn(0.5 * (n - 1.0)) / numerics::gamma_fn(0.5 * n);
  t.omega = constants::sphere_area(N);
  return t;
}

double polar_integral(int N, double phi) {
  static const numerics::QuadratureSpec tight{1e-17, 1e-14, 200, 1.0};
  if (phi <= 0) return 0.0;
  const double p = N - 2.0;
  return numerics::integrate([p](double x) { return std::pow(std::sin(x), p); }, 0.0, phi, tight).value;
}

}  // namespace

double cap_density(const BallDomain& dom, double rho_P, double r) {
  if (r < 0) return 0.0;
  const int N = dom.N;
  const CapTables tab = cap_tables(N);
  const double full = tab.omega * std::pow(r, N - 1.0);
  if (r + rho_P <= dom.R) return full;
  if (r >= dom.R + rho_P) return 0.0;
  if (rho_P == 0.0) return 0.0;  // r > R here
  const double c = std::clamp((rho_P * rho_P + r * r - dom.R * dom.R) / (2.0 * rho_P * r), -1.0, 1.0);
  const double phi_max = std::acos(c);
  double polar;
  if (phi_max <= 0.5 * std::numbers::pi) {
    polar = polar_integral(N, phi_max);
  } else {
    polar = tab.full_polar - polar_integral(N, std::numbers::pi - phi_max);
  }
  return std::pow(r, N - 1.0) * tab.sigma * polar;
}

std::vector<double> concentration_hints(double eps, double limit) {
  std::vector<double> pts;
  for (double x = eps; x < limit; x *= 4.0) pts.push_back(x);
  return pts;
}

namespace {

double checked_center(const BallDomain& dom, double rho_P) {
  dom.validate();
  if (!(rho_P >= 0) || rho_P > dom.R * (1.0 + 1e-15)) {
    std::ostringstream os;
    os << "ball_radial_integral: center distance " << rho_P << " outside [0, R]";
    throw DomainError(os.str());
  }
  return std::min(rho_P, dom.R);
}

numerics::IntegrateOptions split_options(const BallDomain& dom, double rho_P, std::span<const double> hints) {
  numerics::IntegrateOptions opts;
  opts.breakpoints.assign(hints.begin(), hints.end());
  // μ has a kink where the sphere about P first touches the boundary.
  if (dom.R - rho_P > 0) opts.breakpoints.push_back(dom.R - rho_P);
  return opts;
}

}  // namespace

double ball_radial_integral(const BallDomain& dom, double rho_P, const std::function<double(double)>& g,
                            const numerics::QuadratureSpec& spec, std::span<const double> hints) {
  rho_P = checked_center(dom, rho_P);
  return numerics::integrate([&](double r) { return g(r) * cap_density(dom, rho_P, r); }, 0.0, dom.R + rho_P,
                             spec, split_options(dom, rho_P, hints))
      .value;
}

std::vector<double> ball_radial_integrals(const BallDomain& dom, double rho_P, const numerics::VectorIntegrand& g,
                                          std::size_t components, const numerics::QuadratureSpec& spec,
                                          std::span<const double> hints) {
  rho_P = checked_center(dom, rho_P);
  auto weighted = [&](double r, std::span<double> out) {
    g(r, out);
    const double mu = cap_density(dom, rho_P, r);
    for (double& v : out) v *= mu;
  };
  return numerics::integrate_many(weighted, components, 0.0, dom.R + rho_P, spec, split_options(dom, rho_P, hints))
      .value;
}

InstantonNorms instanton_norms(const BallDomain& dom, const Instanton& inst, double q,
                               const numerics::QuadratureSpec& spec) {
  inst.validate();
  if (inst.N != dom.N) throw DomainError("instanton_norms: dimension mismatch");
  const double rho = inst.center_dist;
  const auto hints = concentration_hints(inst.eps, dom.R + rho);
  const double two_star = 2.0 * dom.N / (dom.N - 2.0);
  const auto v = ball_radial_integrals(
      dom, rho,
      [&](double r, std::span<double> out) {
        const auto p = instanton_profile(inst, r);
        out[0] = std::pow(p.value, q);
        out[1] = std::pow(p.value, two_star);
        out[2] = p.value * p.value;
        out[3] = p.radial_derivative * p.radial_derivative;
      },
      4, spec, hints);
  return {v[0], std::pow(v[1], 1.0 / two_star), v[2], v[3]};
}

}  // namespace sobolev::geometry
