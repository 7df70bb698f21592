#include "sobolev/constants.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace sobolev::constants {

namespace {

using numerics::gamma_fn;
using numerics::log_gamma_fn;

std::string shortest(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

void check_dimension(int N, const ExponentOptions& options) {
  if (N >= 5) return;
  if (options.allow_low_dimension && N >= 3) return;
  std::ostringstream os;
  os << "dimension N = " << N << " unsupported (N >= 5, or N >= 3 with the low-dimension flag)";
  throw DomainError(os.str());
}

Exponents fill(int N, double q, const ExponentOptions& options) {
  Exponents e;
  e.N = N;
  e.q = q;
  const double n = N;
  e.two_star = 2.0 * n / (n - 2.0);
  e.two_sharp = 2.0 * n / (n - 1.0);
  e.two_flat = 2.0 * (n - 1.0) / (n - 2.0);
  e.s = 2.0 - n + q / (e.two_star - q);
  e.t = (2.0 / (n - 2.0)) / (e.two_star - q);
  e.theory_out_of_range = N < 5;
  (void)options;
  return e;
}

}  // namespace

Exponents make_exponents(int N, double q, ExponentOptions options) {
  check_dimension(N, options);
  const Exponents bounds = fill(N, q, options);
  // One-ulp slack so that decimal renderings of the endpoints are accepted.
  const double slack = 4.0 * std::numeric_limits<double>::epsilon() * bounds.two_flat;
  if (!std::isfinite(q) || q < bounds.two_sharp - slack || q > bounds.two_flat + slack) {
    std::ostringstream os;
    os << "q = " << shortest(q) << " outside the valid interval [2#, 2b] = [" << shortest(bounds.two_sharp) << ", "
       << shortest(bounds.two_flat) << "] for N = " << N;
    throw RangeError(os.str());
  }
  return fill(N, std::clamp(q, bounds.two_sharp, bounds.two_flat), options);
}

Exponents make_exponents(int N, QKeyword q, ExponentOptions options) {
  check_dimension(N, options);
  const Exponents ref = fill(N, 2.0, options);
  switch (q) {
    case QKeyword::two_sharp: {
      Exponents e = fill(N, ref.two_sharp, options);
      e.s = 0.0;
      e.t = 2.0 / ref.two_sharp;
      return e;
    }
    case QKeyword::two_flat: {
      Exponents e = fill(N, ref.two_flat, options);
      e.s = 1.0;
      e.t = 1.0;
      return e;
    }
    case QKeyword::midpoint:
      return fill(N, 0.5 * (ref.two_sharp + ref.two_flat), options);
  }
  throw DomainError("unknown q keyword");
}

QKeyword parse_q_keyword(const std::string& name) {
  if (name == "two_sharp") return QKeyword::two_sharp;
  if (name == "two_flat") return QKeyword::two_flat;
  if (name == "midpoint") return QKeyword::midpoint;
  throw DomainError("unknown q keyword '" + name + "' (expected two_sharp, two_flat, midpoint)");
}

std::string to_string(QKeyword k) {
  switch (k) {
    case QKeyword::two_sharp: return "two_sharp";
    case QKeyword::two_flat: return "two_flat";
    case QKeyword::midpoint: return "midpoint";
  }
  return "?";
}

double sphere_area(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / gamma_fn(0.5 * N);
}

double sobolev_constant_pow(int N) {
  const double n = N;
  return std::pow(std::numbers::pi, 0.5 * (n + 1.0)) / std::pow(2.0, n - 1.0) *
         std::pow(n * (n - 2.0), 0.5 * n) / gamma_fn(0.5 * (n + 1.0));
}

double instanton_qnorm_closed_form(int N, double q) {
  const double n = N;
  const double top = 0.5 * (n - 2.0) * q - 0.5 * n;
  if (!(top > 0)) {
    std::ostringstream os;
    os << "B(q,N): Gamma pole, need (N-2)q/2 - N/2 > 0 (N = " << N << ", q = " << q << ")";
    throw DomainError(os.str());
  }
  const double log_ratio = log_gamma_fn(top) - log_gamma_fn(0.5 * (n - 2.0) * q);
  return std::pow(std::numbers::pi, 0.5 * n) * std::pow(n * (n - 2.0), 0.5 * n) * std::exp(log_ratio);
}

double curvature_coefficient(int N) {
  if (N <= 3) throw DomainError("A(N): Gamma pole at N = 3");
  const double n = N;
  return (n - 1.0) / n / std::sqrt(std::numbers::pi) * gamma_fn(0.5 * (n - 3.0)) /
         gamma_fn(0.5 * (n - 2.0));
}

ConstantsTable closed_form_constants(const Exponents& exp) {
  ConstantsTable c;
  c.S_pow_N2 = sobolev_constant_pow(exp.N);
  c.S = std::pow(c.S_pow_N2, 2.0 / exp.N);
  c.omega_N = sphere_area(exp.N);
  c.B = instanton_qnorm_closed_form(exp.N, exp.q);
  c.A = curvature_coefficient(exp.N);
  c.threshold = c.S * std::pow(2.0, -2.0 / exp.N);
  return c;
}

namespace {

double instanton(double n, double r) {
  const double k = n * (n - 2.0);
  return std::pow(k / (k + r * r), 0.5 * (n - 2.0));
}

}  // namespace

double oracle_instanton_energy(int N, const numerics::QuadratureSpec& spec) {
  if (N < 3) throw DomainError("oracle_instanton_energy: N >= 3 required");
  const double n = N;
  const double k = n * (n - 2.0);
  auto integrand = [=](double r) {
    const double du = -(n - 2.0) * r / (k + r * r) * instanton(n, r);
    return du * du * std::pow(r, n - 1.0);
  };
  numerics::IntegrateOptions opts;
  opts.breakpoints = {std::sqrt(k)};
  // U'(r)² r^{N-1} ~ (N-2)² k^{N-2} r^{1-N}
  opts.tail = [=](double L) {
    return (n - 2.0) * (n - 2.0) * std::pow(k, n - 2.0) * std::pow(L, 2.0 - n) / (n - 2.0);
  };
  return sphere_area(N) * numerics::integrate(integrand, 0.0, numerics::kInf, spec, opts).value;
}

double oracle_instanton_qnorm(int N, double q, const numerics::QuadratureSpec& spec) {
  const double n = N;
  if (!(q > n / (n - 2.0))) {
    throw DomainError("oracle_instanton_qnorm: q > N/(N-2) required for integrability");
  }
  const double k = n * (n - 2.0);
  auto integrand = [=](double r) { return std::pow(instanton(n, r), q) * std::pow(r, n - 1.0); };
  numerics::IntegrateOptions opts;
  opts.breakpoints = {std::sqrt(k)};
  // U^q r^{N-1} ~ k^{(N-2)q/2} r^{N-1-(N-2)q}
  const double decay = (n - 2.0) * q - n;
  opts.tail = [=](double L) { return std::pow(k, 0.5 * (n - 2.0) * q) * std::pow(L, -decay) / decay; };
  return sphere_area(N) * numerics::integrate(integrand, 0.0, numerics::kInf, spec, opts).value;
}

}  // namespace sobolev::constants
