#pragma once

// Numerical foundation: Gamma function, adaptive Gauss-Legendre quadrature,
// bracketed root finding and a bounded Nelder-Mead minimizer.

#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sobolev {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Thrown when an adaptive integration runs out of subdivisions.  The best
/// available estimate and its error bound travel with the exception.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double error_bound)
      : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace numerics {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct QuadratureSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_subdivisions = 4000;
  double tail_cutoff = 1e6;

  /// Throws DomainError when a field violates its invariant.
  void validate() const;
};

struct OptimizerSpec {
  double param_tol = 1e-8;
  double value_tol = 1e-12;
  int max_iters = 2000;
  int restarts = 2;

  void validate() const;
};

double gamma_fn(double x);
double log_gamma_fn(double x);
double beta_fn(double a, double b);

struct IntegrationResult {
  double value = 0.0;  ///< includes `tail` when an analytic tail was supplied
  double error = 0.0;  ///< estimated quadrature error on the finite part
  double tail = 0.0;   ///< analytic tail contribution beyond the cutoff
  int panels = 0;
};

struct IntegrateOptions {
  /// Interior points at which the interval is split before adaptation starts.
  std::vector<double> breakpoints;
  /// For b = +inf: returns the integral of f over [cutoff, inf).
  std::function<double(double)> tail;
};

inline constexpr std::size_t kMaxComponents = 8;

/// Writes the integrand components at x into `out`.
using VectorIntegrand = std::function<void(double x, std::span<double> out)>;

struct VectorIntegrationResult {
  std::vector<double> value;
  std::vector<double> error;
  int panels = 0;
};

/// Adaptive bisection with a 20-point Gauss-Legendre panel rule; each panel's
/// error is the difference between the one-panel and two-half-panel values.
/// b may be +inf, in which case the range is truncated at spec.tail_cutoff.
IntegrationResult integrate(const std::function<double(double)>& f, double a, double b,
                            const QuadratureSpec& spec, const IntegrateOptions& options = {});

/// Several integrands over one finite interval sharing every function
/// evaluation; each component meets its own abs/rel target.
VectorIntegrationResult integrate_many(const VectorIntegrand& f, std::size_t components, double a, double b,
                                       const QuadratureSpec& spec, const IntegrateOptions& options = {});

/// Brent's method.  Requires f(lo) and f(hi) of opposite sign (a zero at an
/// endpoint is accepted).
double find_root(const std::function<double(double)>& f, double lo, double hi, double tol);

struct Bound {
  double lo = -kInf;
  double hi = kInf;
};

struct MinimizeResult {
  std::vector<double> argmin;
  double min = 0.0;
  bool converged = false;
  int evaluations = 0;
};

/// Nelder-Mead with projection onto the box and `spec.restarts` re-inflations
/// of the simplex around the incumbent.  Deterministic.
MinimizeResult minimize(const std::function<double(std::span<const double>)>& f,
                        std::vector<double> start, std::span<const Bound> bounds,
                        const OptimizerSpec& spec);

}  // namespace numerics
}  // namespace sobolev
