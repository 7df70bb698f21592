#include "sobolev/experiments.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace sobolev::experiments {

using constants::Exponents;
using geometry::BallDomain;

std::vector<double> geometric_grid(double eps0, int count) {
  if (!(eps0 > 0) || count < 1) throw DomainError("geometric_grid: eps0 > 0 and count >= 1 required");
  std::vector<double> g(count);
  for (int k = 0; k < count; ++k) g[k] = std::ldexp(eps0, -k);
  return g;
}

namespace {

void check_grid(const std::vector<double>& eps, double R) {
  if (eps.size() < 2) throw DomainError("eps grid needs at least two values");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0)) throw DomainError("eps grid values must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw DomainError("eps grid must be strictly decreasing");
  }
  if (eps.front() > 0.1 * R * (1 + 1e-12)) throw DomainError("eps grid must lie in (0, R/10]");
}

// Richardson elimination of a linear-in-ε error term between neighbours.
void extrapolate(SweepResult& s) {
  const std::size_t n = s.scaled.size();
  s.fitted.assign(n, 0.0);
  s.fitted[0] = s.scaled[0];
  for (std::size_t k = 1; k < n; ++k) {
    const double ratio = s.eps_values[k - 1] / s.eps_values[k];
    s.fitted[k] = (ratio * s.scaled[k] - s.scaled[k - 1]) / (ratio - 1.0);
  }
  s.fitted_coefficient = s.fitted[n - 1];
  s.fit_residual = n >= 3 ? std::abs(s.fitted[n - 1] - s.fitted[n - 2]) : std::abs(s.scaled[n - 1] - s.scaled[n - 2]);
}

geometry::Instanton boundary_instanton(const BallDomain& dom, double eps) {
  return geometry::Instanton{dom.N, eps, dom.R};
}

}  // namespace

// ---------------------------------------------------------------------------

AppendixResult appendix_sweep(const BallDomain& dom, const Exponents& exp, const std::vector<double>& eps_grid,
                              const numerics::QuadratureSpec& spec) {
  dom.validate();
  check_grid(eps_grid, dom.R);
  const double half_B = 0.5 * constants::instanton_qnorm_closed_form(exp.N, exp.q);
  const double inv_t = 1.0 / exp.t;

  AppendixResult out;
  SweepResult& s = out.sweep;
  s.expected_coefficient = half_B;
  for (double eps : eps_grid) {
    double raw;
    try {
      raw = geometry::instanton_norms(dom, boundary_instanton(dom, eps), exp.q, spec).q_norm_q;
    } catch (const ConvergenceError&) {
      s.truncated = true;
      break;
    }
    s.eps_values.push_back(eps);
    s.raw.push_back(raw);
    s.scaled.push_back(raw / std::pow(eps, inv_t));
    out.remainder.push_back((raw - half_B * std::pow(eps, inv_t)) / std::pow(eps, 1.0 + inv_t));
  }
  if (s.eps_values.size() < 2) throw ConvergenceError("appendix_sweep: fewer than two usable ε values", 0, 0);
  extrapolate(s);

  // Bounded remainder: no growth beyond a fixed factor of the coarsest value
  // as ε shrinks, i.e. the ε^{1+1/t} order is not beaten by a slower term.
  double first = std::abs(out.remainder.front());
  out.remainder_max = 0.0;
  for (double r : out.remainder) out.remainder_max = std::max(out.remainder_max, std::abs(r));
  out.remainder_bounded = std::isfinite(out.remainder_max) && out.remainder_max <= 4.0 * std::max(first, 1.0);
  return out;
}

CurvatureResult curvature_slope(const BallDomain& dom, const std::vector<double>& eps_grid,
                                const numerics::QuadratureSpec& spec) {
  dom.validate();
  check_grid(eps_grid, dom.R);
  const int N = dom.N;
  const double thr = fields::threshold(N);
  const double S = std::pow(constants::sobolev_constant_pow(N), 2.0 / N);
  const double two_star = 2.0 * N / (N - 2.0);

  CurvatureResult out;
  SweepResult& s = out.sweep;
  s.expected_coefficient = std::pow(2.0, (N - 2.0) / N) * S * constants::curvature_coefficient(N) * dom.mean_curvature();
  for (double eps : eps_grid) {
    double beta0;
    try {
      // q only feeds the unused q-norm; any admissible value works.
      const auto n = geometry::instanton_norms(dom, boundary_instanton(dom, eps), two_star, spec);
      beta0 = n.grad_sq / (n.crit_norm * n.crit_norm);
    } catch (const ConvergenceError&) {
      s.truncated = true;
      break;
    }
    s.eps_values.push_back(eps);
    s.raw.push_back(beta0);
    s.scaled.push_back((thr - beta0) / eps);
  }
  if (s.eps_values.size() < 2) throw ConvergenceError("curvature_slope: fewer than two usable ε values", 0, 0);
  extrapolate(s);
  out.intercept_rel_error = std::abs(s.raw.back() - thr) / thr;
  out.concentration_scale = std::sqrt(N * (N - 2.0));
  out.normalized_slope = s.fitted_coefficient / out.concentration_scale;
  return out;
}

// ---------------------------------------------------------------------------

CalculusCheck calculus_lemma_check(double q, double t, long samples, std::uint64_t seed) {
  if (!(q > 0) || !(t > 0) || samples < 1) throw DomainError("calculus_lemma_check: invalid arguments");
  const double p = 2.0 / t;
  CalculusCheck out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  auto probe = [&](double x) {
    // (1+x)^q - 1 via expm1/log1p keeps the small-|x| margin free of cancellation.
    const double lhs = std::expm1(q * std::log1p(x));
    const double rhs = 0.5 * q * t * std::pow(std::abs(x), p) - q * std::abs(x);
    const double margin = (lhs - rhs) / std::max(1.0, lhs + 1.0);
    ++out.samples;
    if (margin < -1e-12) ++out.violations;
    if (margin < out.worst_margin) {
      out.worst_margin = margin;
      out.worst_x = x;
    }
  };

  probe(0.0);
  probe(-1.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dense(-1.0, 1e3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const long remaining = std::max(0L, samples - 2);
  for (long i = 0; i < remaining; ++i) {
    switch (i % 4) {
      case 0:
      case 1:
        probe(dense(rng));
        break;
      case 2:  // near zero on both sides, log-spaced magnitudes 1e-12 .. 1
        probe((unit(rng) < 0.5 ? -1.0 : 1.0) * std::pow(10.0, -12.0 * unit(rng)));
        break;
      default:  // large x, log-spaced 1e3 .. 1e12
        probe(std::pow(10.0, 3.0 + 9.0 * unit(rng)));
        break;
    }
  }
  out.pass = out.violations == 0;
  return out;
}

// ---------------------------------------------------------------------------

std::pair<double, double> eigen_residual_max(int M, double R_trunc, int N, double grading) {
  if (M < 16) throw DomainError("eigen_residuals: M >= 16 required");
  if (!(R_trunc > 0)) throw DomainError("eigen_residuals: R_trunc must be positive");
  if (N < 3) throw DomainError("eigen_residuals: N >= 3 required");
  if (!(grading >= 0)) throw DomainError("eigen_residuals: grading must be nonnegative");
  const double n = N;
  const double k = n * (n - 2.0);
  const double two_star = 2.0 * n / (n - 2.0);
  // r = R sinh(βξ)/sinh(β) on a uniform ξ grid; β = 0 is the uniform mesh.
  std::vector<double> r(M + 1), U(M + 1), w(M + 1);
  for (int i = 0; i <= M; ++i) {
    const double xi = static_cast<double>(i) / M;
    r[i] = grading == 0 ? R_trunc * xi : R_trunc * std::sinh(grading * xi) / std::sinh(grading);
    U[i] = std::pow(k / (k + r[i] * r[i]), 0.5 * (n - 2.0));
    w[i] = -(n - 2.0) / (k + r[i] * r[i]) * U[i];  // U'(r)/r
  }
  // Radial Laplacian in dimension `dim` with the even-reflection closure at 0.
  auto laplacian = [&](const std::vector<double>& f, int i, double dim) {
    if (i == 0) return dim * 2.0 * (f[1] - f[0]) / (r[1] * r[1]);
    const double hm = r[i] - r[i - 1];
    const double hp = r[i + 1] - r[i];
    const double d2 = 2.0 * ((f[i + 1] - f[i]) / hp - (f[i] - f[i - 1]) / hm) / (hp + hm);
    const double d1 = (hm * hm * f[i + 1] - hp * hp * f[i - 1] + (hp * hp - hm * hm) * f[i]) / (hp * hm * (hp + hm));
    return d2 + (dim - 1.0) * d1 / r[i];
  };
  double res_U = 0.0, res_dU = 0.0;
  for (int i = 0; i < M; ++i) {
    res_U = std::max(res_U, std::abs(laplacian(U, i, n) + std::pow(U[i], two_star - 1.0)));
    // g = r w turns g'' + (N-1)g'/r - (N-1)g/r² into r (w'' + (N+1)w'/r).
    const double rw = laplacian(w, i, n + 2.0) + (two_star - 1.0) * std::pow(U[i], two_star - 2.0) * w[i];
    res_dU = std::max(res_dU, std::abs(r[i] * rw));
  }
  return {res_U, res_dU};
}

EigenResiduals eigen_residuals(int M, double R_trunc, int N, double grading) {
  const auto [u1, d1] = eigen_residual_max(M, R_trunc, N, grading);
  const auto [u2, d2] = eigen_residual_max(2 * M, R_trunc, N, grading);
  const auto [uu, du] = eigen_residual_max(M, R_trunc, N, 0.0);
  return {u1, d1, std::log2(u1 / u2), std::log2(d1 / d2), uu, du};
}

// ---------------------------------------------------------------------------
// Trial family

namespace {

struct Family {
  BallDomain dom;
  Exponents exp;
  double a;
  double thr;
  double mass_level;  // constant with the same L^{2*} mass as a boundary bubble
  double log_eps_lo, log_eps_hi;
  numerics::QuadratureSpec quad;

  Family(const BallDomain& d, const Exponents& e, double a_, const numerics::QuadratureSpec& q, const FamilySpec& f)
      : dom(d), exp(e), a(a_), thr(fields::threshold(e.N)), quad(q) {
    dom.validate();
    if (!(a > 0)) throw DomainError("trial family: a must be positive");
    if (e.N != d.N) throw DomainError("trial family: exponent/domain dimension mismatch");
    if (!(f.eps_min_rel > 0 && f.eps_min_rel < 1)) throw DomainError("trial family: eps_min_rel must lie in (0,1)");
    mass_level = std::pow(0.5 * constants::sobolev_constant_pow(e.N) / dom.volume(), 1.0 / e.two_star);
    log_eps_lo = std::log(f.eps_min_rel * dom.R);
    log_eps_hi = std::log(dom.R);
  }

  fields::ProfileField member(double log_eps, double theta) const {
    fields::ProfileField f;
    f.dom = dom;
    f.exponents = exp;
    f.a = a;
    f.inst = geometry::Instanton{dom.N, std::exp(log_eps), dom.R};
    f.c = 1.0 - theta;
    f.d = theta * mass_level;
    return f;
  }

  fields::FieldNorms norms_at(double log_eps, double theta) const {
    return fields::norms(member(log_eps, theta), {}, quad);
  }

  std::array<numerics::Bound, 2> bounds() const { return {{{log_eps_lo, log_eps_hi}, {0.0, 1.0}}}; }

  std::vector<std::vector<double>> starts(int eps_starts) const {
    std::vector<std::vector<double>> out;
    const int n = std::max(eps_starts, 2);
    for (int i = 0; i < n; ++i) {
      const double le = log_eps_lo + (log_eps_hi - log_eps_lo) * i / (n - 1);
      for (double theta : {0.0, 0.5}) out.push_back({le, theta});
    }
    return out;
  }
};

double signed_critical_alpha(const fields::FieldNorms& n, double thr) {
  const auto rep = fields::functionals(n, 0.0);
  return (thr - rep.beta) / (rep.beta * rep.delta);
}

FieldParams params_of(const Family& fam, double log_eps, double theta) {
  FieldParams p;
  p.theta = theta;
  p.eps = std::exp(log_eps);
  if (theta >= 1.0) {
    p.constant = true;
    p.c = 0.0;
    p.d = fam.mass_level;
  } else {
    p.c = 1.0;
    p.d = theta * fam.mass_level / (1.0 - theta);
  }
  return p;
}

struct Found {};  // early exit once a witness below threshold is found

}  // namespace

fields::ProfileField family_member(const BallDomain& dom, const Exponents& exp, double a, double log_eps,
                                   double theta) {
  return Family(dom, exp, a, numerics::QuadratureSpec{}, FamilySpec{}).member(log_eps, theta);
}

namespace {

struct MinOverFamily {
  double value;
  std::vector<double> arg;
  std::vector<bool> converged;
};

MinOverFamily minimize_over_family(const Family& fam, const std::function<double(double, double)>& objective,
                                   const numerics::OptimizerSpec& opt, int eps_starts) {
  const auto bounds = fam.bounds();
  MinOverFamily best{std::numeric_limits<double>::infinity(), {}, {}};
  auto f = [&](std::span<const double> x) { return objective(x[0], x[1]); };
  for (const auto& start : fam.starts(eps_starts)) {
    const auto r = numerics::minimize(f, start, bounds, opt);
    best.converged.push_back(r.converged);
    if (r.min < best.value) {
      best.value = r.min;
      best.arg = r.argmin;
    }
  }
  // The pure constant sits on the θ = 1 edge; evaluate it exactly.
  const double at_constant = objective(fam.log_eps_hi, 1.0);
  if (at_constant < best.value) {
    best.value = at_constant;
    best.arg = {fam.log_eps_hi, 1.0};
  }
  return best;
}

}  // namespace

double family_min_psi(const BallDomain& dom, const Exponents& exp, double a, double alpha,
                      const numerics::OptimizerSpec& opt, const numerics::QuadratureSpec& quad,
                      const FamilySpec& family) {
  const Family fam(dom, exp, a, quad, family);
  auto psi = [&](double le, double th) { return fields::functionals(fam.norms_at(le, th), alpha).psi; };
  return minimize_over_family(fam, psi, opt, family.eps_starts).value;
}

Alpha0Report estimate_alpha0(const BallDomain& dom, const Exponents& exp, double a,
                             const numerics::OptimizerSpec& opt, const numerics::QuadratureSpec& quad,
                             const std::vector<double>& alpha_grid, const FamilySpec& family, bool run_bisection) {
  const Family fam(dom, exp, a, quad, family);
  const int N = exp.N;
  const double vol = dom.volume();
  const double S_pow = constants::sobolev_constant_pow(N);
  const double S = std::pow(S_pow, 2.0 / N);
  const double B = constants::instanton_qnorm_closed_form(N, exp.q);

  Alpha0Report rep;
  rep.N = N;
  rep.q = exp.q;
  rep.a = a;
  rep.R = dom.R;

  const double level = S / std::pow(2.0 * vol, 2.0 / N);
  if (a <= level) {
    rep.lb_constant_test = std::pow(vol, 1.0 - exp.t) * (level - a) / std::pow(a, 0.5 * exp.s);
  }
  rep.lb_curvature = std::pow(2.0, exp.t) * S_pow * constants::curvature_coefficient(N) / std::pow(B, exp.t) *
                     dom.mean_curvature();

  // Maximise the critical α over the family: minimise its negative.
  auto neg_crit = [&](double le, double th) { return -signed_critical_alpha(fam.norms_at(le, th), fam.thr); };
  const auto best = minimize_over_family(fam, neg_crit, opt, family.eps_starts);
  rep.start_converged = best.converged;
  rep.lb_variational = -best.value;
  rep.best_field = params_of(fam, best.arg[0], best.arg[1]);
  rep.boundary_limit = -neg_crit(fam.log_eps_lo, 0.0);
  if (rep.lb_constant_test && *rep.lb_constant_test > rep.lb_variational) {
    rep.lb_variational = *rep.lb_constant_test;
    rep.best_field = params_of(fam, fam.log_eps_hi, 1.0);
  }

  for (double alpha : alpha_grid) {
    auto psi = [&](double le, double th) { return fields::functionals(fam.norms_at(le, th), alpha).psi; };
    rep.s_alpha_curve.emplace_back(alpha, minimize_over_family(fam, psi, opt, family.eps_starts).value);
  }
  for (std::size_t i = 1; i < rep.s_alpha_curve.size(); ++i) {
    const double prev = rep.s_alpha_curve[i - 1].second;
    if (rep.s_alpha_curve[i].second < prev - 1e-9 * std::abs(prev)) rep.s_alpha_monotone = false;
  }

  if (run_bisection) {
    // "some family member has Ψ_α below threshold"; stops at the first witness.
    auto below = [&](double alpha) {
      auto psi = [&](double le, double th) {
        const double v = fields::functionals(fam.norms_at(le, th), alpha).psi;
        if (v < fam.thr) throw Found{};
        return v;
      };
      try {
        minimize_over_family(fam, psi, opt, family.eps_starts);
      } catch (const Found&) {
        return true;
      }
      return false;
    };
    double lo = 0.0;
    double hi = std::max(1.0, 2.0 * rep.lb_variational);
    while (below(hi)) {
      lo = hi;
      hi *= 2.0;
    }
    while (hi - lo > 1e-6 * hi) {
      const double mid = 0.5 * (lo + hi);
      (below(mid) ? lo : hi) = mid;
    }
    rep.bisection_estimate = 0.5 * (lo + hi);
    rep.bisection_rel_diff = std::abs(rep.bisection_estimate - rep.lb_variational) / rep.lb_variational;
  }
  return rep;
}

S0Gap s0_gap(const BallDomain& dom, const Exponents& exp, double a, const numerics::OptimizerSpec& opt,
             const numerics::QuadratureSpec& quad, const FamilySpec& family) {
  const Family fam(dom, exp, a, quad, family);
  auto beta = [&](double le, double th) { return fields::functionals(fam.norms_at(le, th), 0.0).beta; };
  const auto best = minimize_over_family(fam, beta, opt, family.eps_starts);

  S0Gap out;
  out.threshold = fam.thr;
  out.s0_estimate = best.value;
  out.relative_gap = (fam.thr - best.value) / fam.thr;
  out.best_field = params_of(fam, best.arg[0], best.arg[1]);
  out.start_converged = best.converged;

  // Instanton-only slice: the boundary-concentration mechanism on its own.
  const std::array<numerics::Bound, 1> b1{{{fam.log_eps_lo, fam.log_eps_hi}}};
  double inst_min = std::numeric_limits<double>::infinity();
  const int n = std::max(family.eps_starts, 2);
  for (int i = 0; i < n; ++i) {
    const double le = fam.log_eps_lo + (fam.log_eps_hi - fam.log_eps_lo) * i / (n - 1);
    const auto r = numerics::minimize([&](std::span<const double> x) { return beta(x[0], 0.0); }, {le}, b1, opt);
    inst_min = std::min(inst_min, r.min);
  }
  out.instanton_only_min = inst_min;
  out.instanton_only_gap = (fam.thr - inst_min) / fam.thr;
  return out;
}

}  // namespace sobolev::experiments
