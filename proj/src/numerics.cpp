#include "sobolev/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>
#include <sstream>

namespace sobolev::numerics {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0) || !(rel_tol > 0) || max_subdivisions < 1 || !(tail_cutoff > 0)) {
    throw DomainError("QuadratureSpec: abs_tol, rel_tol, tail_cutoff must be > 0 and max_subdivisions >= 1");
  }
}

void OptimizerSpec::validate() const {
  if (!(param_tol > 0) || !(value_tol > 0) || max_iters < 1 || restarts < 1) {
    throw DomainError("OptimizerSpec: all fields must be positive");
  }
}

// ---------------------------------------------------------------------------
// Gamma

namespace {

// Lanczos approximation, g = 7, nine terms.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double z) {  // z = x - 1
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (z + static_cast<double>(i));
  return sum;
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << "gamma_fn: argument must be positive and finite, got " << x;
    throw DomainError(os.str());
  }
  // Exact on small integers.
  if (x == std::floor(x) && x <= 25) {
    double r = 1.0;
    for (int k = 2; k < static_cast<int>(x); ++k) r *= k;
    return r;
  }
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  if (x > 140.0) return std::exp(log_gamma_fn(x));
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  // Split the power to delay overflow.
  const double p = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * p * (p * std::exp(-t)) * lanczos_sum(z);
}

double log_gamma_fn(double x) {
  if (!(x > 0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << "log_gamma_fn: argument must be positive and finite, got " << x;
    throw DomainError(os.str());
  }
  if (x < 0.5) {
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma_fn(1.0 - x);
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(lanczos_sum(z));
}

double beta_fn(double a, double b) {
  if (a + b < 140.0) return gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b);
  return std::exp(log_gamma_fn(a) + log_gamma_fn(b) - log_gamma_fn(a + b));
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

constexpr int kGaussOrder = 20;

struct GaussRule {
  std::array<double, kGaussOrder> nodes{};
  std::array<double, kGaussOrder> weights{};
};

double legendre(int n, double x, double& derivative) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  derivative = n * (x * p1 - p0) / (x * x - 1.0);
  return p1;
}

GaussRule make_gauss_rule() {
  GaussRule rule;
  constexpr int n = kGaussOrder;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double dx = legendre(n, x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n, x, dp);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

using Values = std::array<double, kMaxComponents>;

struct PanelSum {
  Values value{};
  Values abs_value{};
};

class Adaptive {
 public:
  Adaptive(const VectorIntegrand& f, std::size_t m, const QuadratureSpec& spec) : f_(f), m_(m), spec_(spec) {}

  PanelSum gauss(double a, double b) const {
    const auto& rule = gauss_rule();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    PanelSum s;
    Values fx{};
    for (int i = 0; i < kGaussOrder; ++i) {
      const double x = mid + half * rule.nodes[i];
      f_(x, std::span<double>(fx.data(), m_));
      for (std::size_t j = 0; j < m_; ++j) {
        if (!std::isfinite(fx[j])) {
          std::ostringstream os;
          os << "integrate: integrand component " << j << " not finite at x = " << x;
          throw DomainError(os.str());
        }
        s.value[j] += rule.weights[i] * fx[j];
        s.abs_value[j] += rule.weights[i] * std::abs(fx[j]);
      }
    }
    for (std::size_t j = 0; j < m_; ++j) {
      s.value[j] *= half;
      s.abs_value[j] *= half;
    }
    return s;
  }

  struct Panel {
    double a, b;
    PanelSum left, right;
    Values value, error;
    double priority;
    bool resolved;  // error is at the rounding floor; splitting further is useless

    bool operator<(const Panel& other) const { return priority < other.priority; }
  };

  Panel make_panel(double a, double b, const PanelSum& whole, const Values& scale) const {
    const double m = 0.5 * (a + b);
    Panel p{a, b, gauss(a, m), gauss(m, b), {}, {}, 0.0, true};
    const bool splittable = m > a && m < b;
    for (std::size_t j = 0; j < m_; ++j) {
      p.value[j] = p.left.value[j] + p.right.value[j];
      p.error[j] = std::abs(p.value[j] - whole.value[j]);
      const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                           (p.left.abs_value[j] + p.right.abs_value[j]);
      if (p.error[j] > floor && splittable) p.resolved = false;
      p.priority = std::max(p.priority, p.error[j] / scale[j]);
    }
    return p;
  }

  std::size_t components() const { return m_; }
  const QuadratureSpec& spec() const { return spec_; }

 private:
  const VectorIntegrand& f_;
  std::size_t m_;
  const QuadratureSpec& spec_;
};

std::vector<double> split_points(double a, double upper, bool geometric, const std::vector<double>& extra) {
  std::vector<double> points;
  if (geometric) {
    for (double step = 1.0; a + step < upper; step *= 8.0) points.push_back(a + step);
  }
  for (double p : extra) {
    if (p > a && p < upper) points.push_back(p);
  }
  points.push_back(a);
  points.push_back(upper);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

VectorIntegrationResult run_adaptive(const Adaptive& engine, const std::vector<double>& points) {
  using Panel = Adaptive::Panel;
  const std::size_t m = engine.components();
  const auto& spec = engine.spec();

  std::vector<PanelSum> coarse;
  Values total{}, total_error{};
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    coarse.push_back(engine.gauss(points[i], points[i + 1]));
    for (std::size_t j = 0; j < m; ++j) total[j] += coarse.back().value[j];
  }
  auto target = [&](std::size_t j) { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total[j])); };
  Values scale{};
  for (std::size_t j = 0; j < m; ++j) scale[j] = target(j);

  std::priority_queue<Panel> active;
  std::vector<Panel> done;
  total = {};
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    Panel p = engine.make_panel(points[i], points[i + 1], coarse[i], scale);
    for (std::size_t j = 0; j < m; ++j) {
      total[j] += p.value[j];
      total_error[j] += p.error[j];
    }
    if (p.resolved) {
      done.push_back(p);
    } else {
      active.push(p);
    }
  }

  auto unconverged = [&] {
    for (std::size_t j = 0; j < m; ++j) {
      if (total_error[j] > target(j)) return true;
    }
    return false;
  };

  int splits = 0;
  while (!active.empty() && unconverged()) {
    if (splits >= spec.max_subdivisions) {
      std::ostringstream os;
      os << "integrate: subdivision budget (" << spec.max_subdivisions << ") exhausted on [" << points.front()
         << ", " << points.back() << "], error estimate " << total_error[0];
      throw ConvergenceError(os.str(), total[0], total_error[0]);
    }
    for (std::size_t j = 0; j < m; ++j) scale[j] = target(j);
    const Panel worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel lp = engine.make_panel(worst.a, mid, worst.left, scale);
    Panel rp = engine.make_panel(mid, worst.b, worst.right, scale);
    for (std::size_t j = 0; j < m; ++j) {
      total[j] += lp.value[j] + rp.value[j] - worst.value[j];
      total_error[j] += lp.error[j] + rp.error[j] - worst.error[j];
    }
    for (Panel* p : {&lp, &rp}) {
      if (p->resolved) {
        done.push_back(*p);
      } else {
        active.push(*p);
      }
    }
    ++splits;
  }

  // Resum to shed accumulated cancellation in the running totals.
  VectorIntegrationResult out;
  out.value.assign(m, 0.0);
  out.error.assign(m, 0.0);
  auto add = [&](const Panel& p) {
    for (std::size_t j = 0; j < m; ++j) {
      out.value[j] += p.value[j];
      out.error[j] += p.error[j];
    }
  };
  for (const auto& p : done) add(p);
  out.panels = static_cast<int>(done.size() + active.size());
  while (!active.empty()) {
    add(active.top());
    active.pop();
  }
  return out;
}

}  // namespace

VectorIntegrationResult integrate_many(const VectorIntegrand& f, std::size_t components, double a, double b,
                                       const QuadratureSpec& spec, const IntegrateOptions& options) {
  spec.validate();
  if (components == 0 || components > kMaxComponents) {
    throw DomainError("integrate_many: component count must be in [1, " + std::to_string(kMaxComponents) + "]");
  }
  if (!(a < b)) throw DomainError("integrate: require a < b");
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_many: limits must be finite");
  const Adaptive engine(f, components, spec);
  return run_adaptive(engine, split_points(a, b, false, options.breakpoints));
}

IntegrationResult integrate(const std::function<double(double)>& f, double a, double b,
                            const QuadratureSpec& spec, const IntegrateOptions& options) {
  spec.validate();
  if (!(a < b)) throw DomainError("integrate: require a < b");
  if (!std::isfinite(a)) throw DomainError("integrate: lower limit must be finite");

  IntegrationResult result;
  double upper = b;
  if (std::isinf(b)) {
    upper = spec.tail_cutoff;
    if (!(upper > a)) throw DomainError("integrate: tail_cutoff must exceed the lower limit");
    if (options.tail) result.tail = options.tail(upper);
  }
  const VectorIntegrand vf = [&f](double x, std::span<double> out) { out[0] = f(x); };
  const Adaptive engine(vf, 1, spec);
  const auto r = run_adaptive(engine, split_points(a, upper, std::isinf(b), options.breakpoints));
  result.value = r.value[0] + result.tail;
  result.error = r.error[0];
  result.panels = r.panels;
  return result;
}

// ---------------------------------------------------------------------------
// Root finding

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(tol > 0)) throw DomainError("find_root: tol must be positive");
  if (lo > hi) std::swap(lo, hi);
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if (!(fa * fb < 0)) {
    std::ostringstream os;
    os << "find_root: no sign change on [" << lo << ", " << hi << "] (f = " << fa << ", " << fb << ")";
    throw BracketError(os.str());
  }
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < 500; ++iter) {
    if (fb * fc > 0) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Nelder-Mead

namespace {

struct Vertex {
  std::vector<double> x;
  double fx;
};

void project(std::vector<double>& x, std::span<const Bound> bounds) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], bounds[i].lo, bounds[i].hi);
}

}  // namespace

MinimizeResult minimize(const std::function<double(std::span<const double>)>& f,
                        std::vector<double> start, std::span<const Bound> bounds,
                        const OptimizerSpec& spec) {
  spec.validate();
  const std::size_t n = start.size();
  if (n == 0) throw DomainError("minimize: empty start vector");
  if (bounds.size() != n) throw DomainError("minimize: bounds/start dimension mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(bounds[i].lo <= bounds[i].hi)) throw DomainError("minimize: empty bound interval");
    if (start[i] < bounds[i].lo || start[i] > bounds[i].hi) {
      throw DomainError("minimize: start point outside bounds");
    }
  }

  MinimizeResult out;
  auto eval = [&](const std::vector<double>& x) {
    ++out.evaluations;
    const double v = f(x);
    return std::isnan(v) ? kInf : v;
  };

  Vertex best{start, eval(start)};
  bool converged = false;
  int iters_left = spec.max_iters;

  for (int round = 0; round <= spec.restarts && iters_left > 0; ++round) {
    std::vector<Vertex> simplex;
    simplex.push_back(best);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> x = best.x;
      const double width = bounds[i].hi - bounds[i].lo;
      double step = std::isfinite(width) ? 0.1 * width : 0.1 * std::max(1.0, std::abs(x[i]));
      if (round > 0) step *= 0.5;
      if (x[i] + step > bounds[i].hi) step = -step;
      x[i] += step;
      project(x, bounds);
      simplex.push_back({x, eval(x)});
    }

    converged = false;
    while (iters_left-- > 0) {
      std::sort(simplex.begin(), simplex.end(),
                [](const Vertex& l, const Vertex& r) { return l.fx < r.fx; });
      double size = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
          size = std::max(size, std::abs(simplex[k].x[i] - simplex[0].x[i]));
        }
      }
      if (size <= spec.param_tol && simplex[n].fx - simplex[0].fx <= spec.value_tol) {
        converged = true;
        break;
      }

      std::vector<double> centroid(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k].x[i] / static_cast<double>(n);
      }
      auto along = [&](double coef) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + coef * (simplex[n].x[i] - centroid[i]);
        project(x, bounds);
        return x;
      };

      Vertex reflected{along(-1.0), 0.0};
      reflected.fx = eval(reflected.x);
      if (reflected.fx < simplex[0].fx) {
        Vertex expanded{along(-2.0), 0.0};
        expanded.fx = eval(expanded.x);
        simplex[n] = expanded.fx < reflected.fx ? expanded : reflected;
        continue;
      }
      if (reflected.fx < simplex[n - 1].fx) {
        simplex[n] = reflected;
        continue;
      }
      const bool outside = reflected.fx < simplex[n].fx;
      Vertex contracted{along(outside ? -0.5 : 0.5), 0.0};
      contracted.fx = eval(contracted.x);
      if (contracted.fx < std::min(reflected.fx, simplex[n].fx)) {
        simplex[n] = contracted;
        continue;
      }
      // Shrink towards the best vertex.
      for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
          simplex[k].x[i] = simplex[0].x[i] + 0.5 * (simplex[k].x[i] - simplex[0].x[i]);
        }
        simplex[k].fx = eval(simplex[k].x);
      }
    }
    auto it = std::min_element(simplex.begin(), simplex.end(),
                               [](const Vertex& l, const Vertex& r) { return l.fx < r.fx; });
    if (it->fx <= best.fx) best = *it;
  }

  out.argmin = best.x;
  out.min = best.fx;
  out.converged = converged;
  return out;
}

}  // namespace sobolev::numerics
