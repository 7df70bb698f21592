#include "sobolev/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "sobolev/constants.hpp"
#include "sobolev/experiments.hpp"
#include "sobolev/fields.hpp"
#include "sobolev/geometry.hpp"

namespace sobolev::suite {

namespace {

using constants::Exponents;
using constants::QKeyword;
using geometry::BallDomain;

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

Criterion timed(int id, std::string name, double limit, const std::function<void(Criterion&)>& body) {
  Criterion c;
  c.id = id;
  c.name = std::move(name);
  c.time_limit = limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail += std::string(c.detail.empty() ? "" : "; ") + "error: " + e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit > 0 && c.seconds > limit) {
    c.pass = false;
    c.detail += "; over time limit " + fmt(limit) + " s";
  }
  return c;
}

}  // namespace

Criterion closed_form_vs_oracle(const SuiteOptions& o) {
  return timed(1, "closed forms match radial quadrature", 10.0, [&](Criterion& c) {
    double worst = 0.0;
    for (int N = 5; N <= 8; ++N) {
      worst = std::max(worst, rel(constants::oracle_instanton_energy(N, o.quad), constants::sobolev_constant_pow(N)));
      for (auto kw : {QKeyword::two_sharp, QKeyword::two_flat}) {
        const double q = constants::make_exponents(N, kw).q;
        worst = std::max(worst, rel(constants::oracle_instanton_qnorm(N, q, o.quad),
                                    constants::instanton_qnorm_closed_form(N, q)));
      }
    }
    c.pass = worst < 1e-8;
    c.detail = "max rel diff " + fmt(worst) + " (tol 1e-8)";
  });
}

Criterion exponent_identities(const SuiteOptions& o) {
  return timed(2, "exponent identities", 0.0, [&](Criterion& c) {
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<int> dim(5, 12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const int N = dim(rng);
      const double n = N;
      const double lo = 2.0 * n / (n - 1.0), hi = 2.0 * (n - 1.0) / (n - 2.0);
      const auto e = constants::make_exponents(N, lo + (hi - lo) * unit(rng));
      const double s_alt = (n - 1.0) * (e.q - e.two_sharp) / (e.two_star - e.q);
      const double t_alt = e.s / n + (n - 1.0) / n;
      worst = std::max({worst, std::abs(e.q * e.t - (2.0 * e.s / (n - 2.0) + 2.0)), std::abs(e.s - s_alt),
                        std::abs(e.t - t_alt)});
    }
    bool endpoints = true;
    for (int N = 5; N <= 12; ++N) {
      const auto lo = constants::make_exponents(N, QKeyword::two_sharp);
      const auto hi = constants::make_exponents(N, QKeyword::two_flat);
      endpoints = endpoints && lo.s == 0.0 && lo.t == 2.0 / lo.two_sharp && hi.s == 1.0 && hi.t == 1.0;
    }
    c.pass = worst <= 1e-13 && endpoints;
    c.detail = "max abs defect " + fmt(worst) + " over 200 draws; endpoints " + (endpoints ? "exact" : "inexact");
  });
}

Criterion qnorm_asymptotics(const SuiteOptions& o) {
  return timed(3, "boundary q-norm asymptotics", 60.0, [&](Criterion& c) {
    // ε = 1e-3 · 2^k, k = 6..0, so the last point sits at 1e-3 exactly.
    const auto grid = experiments::geometric_grid(1e-3 * 64.0, 7);
    bool ok = true;
    double worst = 0.0;
    for (int N : {5, 6}) {
      for (auto kw : {QKeyword::two_sharp, QKeyword::two_flat}) {
        const auto e = constants::make_exponents(N, kw);
        const auto r = experiments::appendix_sweep({N, 1.0}, e, grid, o.quad);
        const double dev = rel(r.sweep.scaled.back(), r.sweep.expected_coefficient);
        worst = std::max(worst, dev);
        ok = ok && !r.sweep.truncated && dev < 0.02 && r.remainder_bounded;
        c.info.push_back("N=" + std::to_string(N) + " q=" + constants::to_string(kw) + ": ratio at 1e-3 " +
                         fmt(r.sweep.scaled.back() / r.sweep.expected_coefficient) + ", extrapolated " +
                         fmt(r.sweep.fitted_coefficient / r.sweep.expected_coefficient) + ", max |remainder| " +
                         fmt(r.remainder_max));
      }
    }
    c.pass = ok;
    c.detail = "max rel deviation at eps=1e-3 " + fmt(worst) + " (tol 2e-2)";
  });
}

Criterion curvature_expansion(const SuiteOptions& o) {
  return timed(4, "boundary curvature slope", 0.0, [&](Criterion& c) {
    const auto grid = experiments::geometric_grid(0.1, 8);
    const int N = 5;
    std::vector<double> slope_R;  // slope · R, should be constant
    double worst = 0.0, worst_norm = 0.0;
    for (double R : {1.0, 2.0, 4.0}) {
      const auto r = experiments::curvature_slope({N, R}, grid, o.quad);
      worst = std::max(worst, rel(r.sweep.fitted_coefficient, r.sweep.expected_coefficient));
      worst_norm = std::max(worst_norm, rel(r.normalized_slope, r.sweep.expected_coefficient));
      slope_R.push_back(r.sweep.fitted_coefficient * R);
      c.info.push_back("R=" + fmt(R) + ": fitted " + fmt(r.sweep.fitted_coefficient) + ", stated " +
                       fmt(r.sweep.expected_coefficient) + ", fitted/sqrt(N(N-2)) " + fmt(r.normalized_slope) +
                       ", intercept rel err " + fmt(r.intercept_rel_error));
    }
    const auto [mn, mx] = std::minmax_element(slope_R.begin(), slope_R.end());
    const double spread = (*mx - *mn) / *mn;
    c.pass = worst < 0.05 && spread < 0.05;
    c.detail = "max rel deviation from 2^{(N-2)/N} S A H: " + fmt(worst) + " (tol 5e-2); 1/R scaling spread " +
               fmt(spread);
    c.info.push_back("slope per concentration length sqrt(N(N-2)) deviates by " + fmt(worst_norm));
  });
}

Criterion calculus_inequality(const SuiteOptions& o) {
  return timed(5, "calculus inequality", 0.0, [&](Criterion& c) {
    long violations = 0, samples = 0;
    double worst = std::numeric_limits<double>::infinity();
    std::uint64_t seed = o.seed;
    for (int N = 5; N <= 8; ++N) {
      for (auto kw : {QKeyword::two_sharp, QKeyword::midpoint, QKeyword::two_flat}) {
        const auto e = constants::make_exponents(N, kw);
        const auto r = experiments::calculus_lemma_check(e.q, e.t, o.calculus_samples, seed++);
        violations += r.violations;
        samples += r.samples;
        worst = std::min(worst, r.worst_margin);
      }
    }
    c.pass = violations == 0 && worst >= -1e-12;
    c.detail = std::to_string(violations) + " violations in " + std::to_string(samples) + " samples; worst margin " +
               fmt(worst);
  });
}

Criterion eigen_residuals(const SuiteOptions&) {
  return timed(6, "eigenfunction residuals", 0.0, [&](Criterion& c) {
    bool ok = true;
    double worst_res = 0.0, worst_order = 0.0;
    for (int N = 5; N <= 8; ++N) {
      const auto r = experiments::eigen_residuals(512, 50.0, N);
      worst_res = std::max({worst_res, r.res_U, r.res_dU});
      worst_order = std::max({worst_order, std::abs(r.order_U - 2.0), std::abs(r.order_dU - 2.0)});
      ok = ok && r.res_U < 1e-3 && r.res_dU < 1e-3 && std::abs(r.order_U - 2.0) <= 0.2 &&
           std::abs(r.order_dU - 2.0) <= 0.2;
      c.info.push_back("N=" + std::to_string(N) + ": graded " + fmt(r.res_U) + " / " + fmt(r.res_dU) + ", orders " +
                       fmt(r.order_U) + " / " + fmt(r.order_dU) + "; uniform mesh " + fmt(r.res_U_uniform) + " / " +
                       fmt(r.res_dU_uniform));
    }
    c.pass = ok;
    c.detail = "max residual " + fmt(worst_res) + " (tol 1e-3), max |order - 2| " + fmt(worst_order);
  });
}

Criterion functional_identities(const SuiteOptions& o) {
  return timed(7, "functional identities", 0.0, [&](Criterion& c) {
    std::mt19937_64 rng(o.seed + 7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> dim(5, 8);
    auto with_scale = [](fields::ProfileField f, double lam) {
      f.c *= lam;
      f.d *= lam;
      return f;
    };
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      fields::ProfileField f;
      const int N = dim(rng);
      const double n = N;
      const double lo = 2.0 * n / (n - 1.0), hi = 2.0 * (n - 1.0) / (n - 2.0);
      f.exponents = constants::make_exponents(N, lo + (hi - lo) * unit(rng));
      f.dom = {N, 0.5 + 1.5 * unit(rng)};
      f.a = 0.25 + 2.0 * unit(rng);
      f.inst = {N, std::pow(10.0, -2.0 + 2.0 * unit(rng)), f.dom.R * unit(rng)};
      f.c = 2.0 * unit(rng);
      f.d = 2.0 * unit(rng);
      if (i % 10 == 0) f.d = 0.0;
      if (i % 10 == 5) f.c = 0.0;
      const double lam = std::pow(10.0, -1.0 + 2.0 * unit(rng));
      for (double alpha : {0.0, 1.0, 10.0}) {
        const auto u = fields::functionals(fields::Field{f}, alpha, o.quad);
        const auto v = fields::functionals(fields::Field{with_scale(f, lam)}, alpha, o.quad);
        const auto w = fields::functionals(fields::Field{with_scale(f, u.tau)}, alpha, o.quad);
        worst = std::max({worst, rel(v.beta, u.beta), rel(v.psi, u.psi), rel(v.tau, u.tau / lam),
                          rel(w.phi, std::pow(u.psi, 0.5 * n) / n)});
        if (u.delta > 0) worst = std::max(worst, rel(v.delta, u.delta));
        if (u.crit_alpha.kind != v.crit_alpha.kind) {
          worst = std::max(worst, 1.0);
        } else if (u.crit_alpha.has_value() && u.crit_alpha.value != 0.0) {
          worst = std::max(worst, rel(v.crit_alpha.value, u.crit_alpha.value));
        }
      }
    }
    c.pass = worst <= 1e-9;
    c.detail = "max rel defect " + fmt(worst) + " over 100 fields x 3 alphas (tol 1e-9)";
  });
}

Criterion constant_solution(const SuiteOptions&) {
  return timed(8, "unique positive constant solution", 0.0, [&](Criterion& c) {
    const int N = 5;
    const BallDomain dom{N, 1.0};
    const auto e = constants::make_exponents(N, QKeyword::two_flat);
    double worst = 0.0;
    int extra_roots = 0;
    for (double a : {0.5, 1.0, 2.0}) {
      const double c_star = std::pow(a, (N - 2.0) / 4.0);
      for (double alpha : {0.0, 1.0, 10.0}) {
        auto res = [&](double x) { return fields::euler_residual_constant(x, alpha, e, a, dom); };
        worst = std::max(worst, std::abs(res(c_star)));
        // Sign changes on a fine grid over (0, 10 c*], each refined by Brent.
        const int n_grid = 4000;
        const double c_max = 10.0 * c_star;
        double x_prev = c_max * 1e-4, f_prev = res(x_prev);
        for (int i = 1; i <= n_grid; ++i) {
          const double x = c_max * (1e-4 + (1.0 - 1e-4) * i / n_grid);
          const double fx = res(x);
          if (f_prev == 0.0 || (f_prev < 0) != (fx < 0)) {
            const double root = f_prev == 0.0 ? x_prev : numerics::find_root(res, x_prev, x, 1e-14 * c_max);
            if (rel(root, c_star) > 1e-8) ++extra_roots;
          }
          x_prev = x;
          f_prev = fx;
        }
      }
    }
    c.pass = worst <= 1e-10 && extra_roots == 0;
    c.detail = "max |residual| at a^{(N-2)/4}: " + fmt(worst) + "; other positive roots found: " +
               std::to_string(extra_roots);
  });
}

Criterion strict_gap(const SuiteOptions& o) {
  return timed(9, "strict gap S_0 < S/2^{2/N} and monotone S_alpha", 0.0, [&](Criterion& c) {
    const BallDomain dom{5, 1.0};
    const auto e = constants::make_exponents(5, QKeyword::two_flat);
    const auto g = experiments::s0_gap(dom, e, 1.0, o.opt, o.quad);
    double prev = g.s0_estimate;
    bool monotone = true;
    std::string curve = "S_0=" + fmt(prev);
    for (double alpha : {0.1, 0.2, 0.5, 1.0, 2.0, 5.0}) {
      const double v = experiments::family_min_psi(dom, e, 1.0, alpha, o.opt, o.quad);
      monotone = monotone && v >= prev * (1.0 - 1e-9);
      prev = v;
      curve += " S_" + fmt(alpha) + "=" + fmt(v);
    }
    c.info.push_back(curve);
    c.pass = g.relative_gap > 1e-3 && monotone;
    c.detail = "relative gap " + fmt(g.relative_gap) + " (need > 1e-3); monotone " + (monotone ? "yes" : "no");
  });
}

Criterion alpha0_consistency(const SuiteOptions& o) {
  return timed(10, "alpha_0 lower-bound consistency", 0.0, [&](Criterion& c) {
    const int N = 5;
    const auto e = constants::make_exponents(N, QKeyword::two_flat);
    const auto base = experiments::estimate_alpha0({N, 1.0}, e, 1.0, o.opt, o.quad, {});
    const double kappa = 2.0;
    const auto scaled = experiments::estimate_alpha0({N, 1.0 / kappa}, e, kappa * kappa, o.opt, o.quad, {});
    const double lb_ref = std::max(base.lb_curvature, base.lb_constant_test.value_or(0.0));
    const bool bounds = base.lb_variational >= (1.0 - 1e-2) * lb_ref;
    const bool agree = base.bisection_rel_diff <= 1e-3;
    const double scaling = rel(scaled.lb_variational, kappa * base.lb_variational);
    c.pass = bounds && agree && scaling <= 1e-2;
    c.detail = "lb_variational " + fmt(base.lb_variational) + " vs max(lb_curvature " + fmt(base.lb_curvature) +
               ", lb_constant_test " + (base.lb_constant_test ? fmt(*base.lb_constant_test) : "n/a") +
               "); bisection rel diff " + fmt(base.bisection_rel_diff) + "; kappa=2 scaling defect " + fmt(scaling);
  });
}

std::vector<Criterion> run_all(const SuiteOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Criterion> out{closed_form_vs_oracle(o), exponent_identities(o), qnorm_asymptotics(o),
                             curvature_expansion(o),   calculus_inequality(o),      eigen_residuals(o),
                             functional_identities(o), constant_solution(o),   strict_gap(o),
                             alpha0_consistency(o)};
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (total > 600.0) {
    out.back().pass = false;
    out.back().detail += "; full suite over 10 min";
  }
  return out;
}

}  // namespace sobolev::suite
