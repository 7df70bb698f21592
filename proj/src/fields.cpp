#include "sobolev/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sobolev::fields {

namespace {

void check_exponents_match(int N, const constants::Exponents& exp, const char* who) {
  if (exp.N != N) {
    std::ostringstream os;
    os << who << ": exponent family is for N = " << exp.N << " but the domain has N = " << N;
    throw DomainError(os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ProfileField

void ProfileField::validate() const {
  dom.validate();
  inst.validate();
  check_exponents_match(dom.N, exponents, "ProfileField");
  if (inst.N != dom.N) throw DomainError("ProfileField: instanton dimension differs from domain");
  if (inst.center_dist > dom.R * (1.0 + 1e-15)) throw DomainError("ProfileField: center outside the ball");
  if (!(c >= 0) || !(d >= 0)) throw DomainError("ProfileField: c and d must be nonnegative");
  if (!(a > 0)) throw DomainError("ProfileField: a must be positive");
  if (c == 0 && d == 0) throw DegenerateFieldError("ProfileField: field is identically zero");
}

double ProfileField::value(double r) const {
  return c * geometry::instanton_profile(inst, r).value + d;
}

FieldNorms norms(const ProfileField& f, std::span<const double> q_list, const numerics::QuadratureSpec& spec) {
  f.validate();
  const auto& exp = f.exponents;
  if (q_list.size() + 4 > numerics::kMaxComponents) throw DomainError("norms: too many extra exponents");

  // Components: |u|², |u|^{2*}, |u|^q, |∇u|², then the extra exponents.
  std::vector<double> powers{2.0, exp.two_star, exp.q};
  powers.insert(powers.end(), q_list.begin(), q_list.end());
  std::vector<double> v(powers.size() + 1, 0.0);
  if (f.c == 0) {
    const double vol = f.dom.volume();
    for (std::size_t i = 0; i < powers.size(); ++i) v[i] = std::pow(f.d, powers[i]) * vol;
  } else {
    const double rho = std::min(f.inst.center_dist, f.dom.R);
    const auto hints = geometry::concentration_hints(f.inst.eps, f.dom.R + rho);
    const std::size_t grad = powers.size();
    v = geometry::ball_radial_integrals(
        f.dom, rho,
        [&](double r, std::span<double> out) {
          const auto p = geometry::instanton_profile(f.inst, r);
          const double u = f.c * p.value + f.d;
          for (std::size_t i = 0; i < grad; ++i) out[i] = std::pow(u, powers[i]);
          // ∇d = 0, so only the instanton contributes to the gradient.
          out[grad] = f.c * f.c * p.radial_derivative * p.radial_derivative;
        },
        powers.size() + 1, spec, hints);
  }

  FieldNorms n;
  n.a = f.a;
  n.exponents = exp;
  n.l2_sq = v[0];
  n.crit_pow = v[1];
  n.q_pow = v[2];
  n.grad_sq = v[powers.size()];
  for (std::size_t i = 0; i < q_list.size(); ++i) n.lp[q_list[i]] = std::pow(v[3 + i], 1.0 / q_list[i]);
  return n;
}

// ---------------------------------------------------------------------------
// RadialGridField

void RadialGridField::validate() const {
  dom.validate();
  check_exponents_match(dom.N, exponents, "RadialGridField");
  if (nodes.size() < 17) throw DomainError("RadialGridField: at least 16 intervals required");
  if (values.size() != nodes.size()) throw DomainError("RadialGridField: nodes/values size mismatch");
  if (nodes.front() != 0.0) throw DomainError("RadialGridField: grid must start at r = 0");
  if (std::abs(nodes.back() - dom.R) > 1e-12 * dom.R) throw DomainError("RadialGridField: grid must end at r = R");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) throw DomainError("RadialGridField: nodes must be strictly increasing");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("RadialGridField: non-finite value");
  }
  if (!(a >= 0)) throw DomainError("RadialGridField: a must be nonnegative");
}

RadialGridField make_uniform_grid_field(const geometry::BallDomain& dom, const constants::Exponents& exp,
                                        double a, int M, const std::function<double(double)>& f) {
  if (M < 16) throw DomainError("make_uniform_grid_field: M >= 16 required");
  RadialGridField g;
  g.dom = dom;
  g.a = a;
  g.exponents = exp;
  g.nodes.resize(M + 1);
  g.values.resize(M + 1);
  for (int i = 0; i <= M; ++i) {
    g.nodes[i] = i == M ? dom.R : dom.R * i / M;
    g.values[i] = f(g.nodes[i]);
  }
  g.validate();
  return g;
}

namespace {

// First derivative at interior nodes by the three-point nonuniform formula;
// zero at both ends (Neumann).
std::vector<double> grid_derivative(const RadialGridField& f) {
  const auto& r = f.nodes;
  const auto& u = f.values;
  const std::size_t n = r.size();
  std::vector<double> du(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = r[i] - r[i - 1];
    const double hp = r[i + 1] - r[i];
    du[i] = (hm * hm * u[i + 1] - hp * hp * u[i - 1] + (hp * hp - hm * hm) * u[i]) / (hp * hm * (hp + hm));
  }
  return du;
}

double grid_integral(const RadialGridField& f, const std::function<double(std::size_t)>& g) {
  const double omega = constants::sphere_area(f.dom.N);
  const auto& r = f.nodes;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double left = g(i) * std::pow(r[i], f.dom.N - 1.0);
    const double right = g(i + 1) * std::pow(r[i + 1], f.dom.N - 1.0);
    sum += 0.5 * (r[i + 1] - r[i]) * (left + right);
  }
  return omega * sum;
}

}  // namespace

FieldNorms norms(const RadialGridField& f, std::span<const double> q_list) {
  f.validate();
  const auto& u = f.values;
  if (std::all_of(u.begin(), u.end(), [](double v) { return v == 0.0; })) {
    throw DegenerateFieldError("RadialGridField: field is identically zero");
  }
  const auto du = grid_derivative(f);
  auto power = [&](double p) { return grid_integral(f, [&](std::size_t i) { return std::pow(std::abs(u[i]), p); }); };

  FieldNorms n;
  n.a = f.a;
  n.exponents = f.exponents;
  n.grad_sq = grid_integral(f, [&](std::size_t i) { return du[i] * du[i]; });
  n.l2_sq = power(2.0);
  n.crit_pow = power(f.exponents.two_star);
  n.q_pow = power(f.exponents.q);
  for (double p : q_list) n.lp[p] = std::pow(power(p), 1.0 / p);
  return n;
}

FieldNorms norms(const Field& f, std::span<const double> q_list, const numerics::QuadratureSpec& spec) {
  return std::visit(
      [&](const auto& field) -> FieldNorms {
        using T = std::decay_t<decltype(field)>;
        if constexpr (std::is_same_v<T, ProfileField>) {
          return norms(field, q_list, spec);
        } else {
          return norms(field, q_list);
        }
      },
      f);
}

// ---------------------------------------------------------------------------
// Functionals

double FieldNorms::crit() const { return std::pow(crit_pow, 1.0 / exponents.two_star); }

double threshold(int N) {
  return std::pow(constants::sobolev_constant_pow(N), 2.0 / N) * std::pow(2.0, -2.0 / N);
}

namespace {

double delta_of(const FieldNorms& n) {
  const auto& e = n.exponents;
  const double norm = std::sqrt(n.norm_sq());
  // δ = ‖u‖^{s-2} |u|_q^{qt} / |u|_{2*}^{2* s/2}; β·δ is the product that
  // multiplies α in Ψ_α.
  return std::pow(norm, e.s - 2.0) * std::pow(n.q_pow, e.t) / std::pow(n.crit(), 0.5 * e.two_star * e.s);
}

}  // namespace

FunctionalReport functionals(const FieldNorms& n, double alpha) {
  if (!(alpha >= 0)) throw DomainError("functionals: alpha must be nonnegative");
  if (!(n.crit_pow > 0) || !(n.norm_sq() > 0)) throw DegenerateFieldError("functionals: degenerate field");
  const auto& e = n.exponents;
  FunctionalReport r;
  r.alpha = alpha;
  r.grad_sq = n.grad_sq;
  r.l2_sq = n.l2_sq;
  r.norm_H1_sq = n.norm_sq();
  r.lp = n.lp;
  r.q_norm = std::pow(n.q_pow, 1.0 / e.q);
  r.crit = n.crit();
  r.beta = r.norm_H1_sq / (r.crit * r.crit);
  r.delta = delta_of(n);
  r.psi = r.beta * (1.0 + alpha * r.delta);
  r.phi = (0.5 * r.norm_H1_sq - n.crit_pow / e.two_star) * std::pow(1.0 + alpha * r.delta, 0.5 * e.N);
  r.tau = std::pow(r.norm_H1_sq / n.crit_pow, 0.25 * (e.N - 2.0));
  r.crit_alpha = critical_alpha(n);
  return r;
}

FunctionalReport functionals(const Field& f, double alpha, const numerics::QuadratureSpec& spec) {
  return functionals(norms(f, {}, spec), alpha);
}

CriticalAlpha critical_alpha(const FieldNorms& n) {
  if (!(n.crit_pow > 0) || !(n.norm_sq() > 0)) throw DegenerateFieldError("critical_alpha: degenerate field");
  const double crit = n.crit();
  const double beta = n.norm_sq() / (crit * crit);
  const double thr = threshold(n.exponents.N);
  CriticalAlpha out;
  if (beta > thr) return out;
  const double bd = beta * delta_of(n);
  if (!(bd > 0)) {
    out.kind = CriticalAlpha::Kind::unbounded;
    return out;
  }
  out.kind = CriticalAlpha::Kind::value;
  out.value = (thr - beta) / bd;
  return out;
}

CriticalAlpha critical_alpha(const Field& f, const numerics::QuadratureSpec& spec) {
  return critical_alpha(norms(f, {}, spec));
}

// ---------------------------------------------------------------------------
// Euler residuals

double euler_residual_constant(double c, double alpha, const constants::Exponents& exp, double a,
                               const geometry::BallDomain& dom) {
  if (!(c > 0)) throw DomainError("euler_residual_constant: c must be positive");
  if (!(a > 0)) throw DomainError("euler_residual_constant: a must be positive");
  check_exponents_match(dom.N, exp, "euler_residual_constant");
  const double vol = dom.volume();
  FieldNorms n;
  n.a = a;
  n.exponents = exp;
  n.l2_sq = c * c * vol;
  n.crit_pow = std::pow(c, exp.two_star) * vol;
  n.q_pow = std::pow(c, exp.q) * vol;
  const double delta = delta_of(n);
  const double s = exp.s, t = exp.t, q = exp.q, ts = exp.two_star;
  return (1.0 + 0.5 * s * alpha * delta) * a * c +
         0.5 * q * t * alpha * std::pow(n.q_pow, t - 1.0) * std::pow(c, q - 1.0) -
         (1.0 + (1.0 + 0.25 * s * ts) * alpha * delta) * std::pow(c, ts - 1.0);
}

std::vector<double> euler_residual_radial(const RadialGridField& f, double alpha) {
  f.validate();
  for (double v : f.values) {
    if (!(v > 0)) throw DomainError("euler_residual_radial: field must be positive on the grid");
  }
  const FieldNorms n = norms(f, {});
  const auto& e = f.exponents;
  const double delta = delta_of(n);
  const double lead = 1.0 + 0.5 * e.s * alpha * delta;
  const double lower = 0.5 * e.q * e.t * alpha * std::pow(n.q_pow, e.t - 1.0);
  const double upper = 1.0 + (1.0 + 0.25 * e.s * e.two_star) * alpha * delta;

  const auto& r = f.nodes;
  const auto& u = f.values;
  const std::size_t M = r.size() - 1;
  const double dim = f.dom.N;
  std::vector<double> res(M + 1);
  for (std::size_t i = 0; i <= M; ++i) {
    double lap;
    if (i == 0) {
      // ghost u_{-1} = u_1; Δu(0) = N u''(0)
      const double h = r[1] - r[0];
      lap = dim * 2.0 * (u[1] - u[0]) / (h * h);
    } else if (i == M) {
      const double h = r[M] - r[M - 1];
      lap = 2.0 * (u[M - 1] - u[M]) / (h * h);
    } else {
      const double hm = r[i] - r[i - 1];
      const double hp = r[i + 1] - r[i];
      const double d2 = 2.0 * ((u[i + 1] - u[i]) / hp - (u[i] - u[i - 1]) / hm) / (hp + hm);
      const double d1 = (hm * hm * u[i + 1] - hp * hp * u[i - 1] + (hp * hp - hm * hm) * u[i]) / (hp * hm * (hp + hm));
      lap = d2 + (dim - 1.0) * d1 / r[i];
    }
    res[i] = lead * (-lap + f.a * u[i]) + lower * std::pow(u[i], e.q - 1.0) -
             upper * std::pow(u[i], e.two_star - 1.0);
  }
  return res;
}

ProfileField rescale(const ProfileField& f, double kappa) {
  if (!(kappa > 0)) throw DomainError("rescale: kappa must be positive");
  ProfileField v = f;
  const double N = f.dom.N;
  v.dom.R = f.dom.R / kappa;
  v.inst.eps = f.inst.eps / kappa;
  v.inst.center_dist = f.inst.center_dist / kappa;
  v.d = std::pow(kappa, 0.5 * (N - 2.0)) * f.d;
  v.a = f.a * kappa * kappa;
  return v;
}

}  // namespace sobolev::fields
