#pragma once

// Runnable checks of the asymptotic and variational statements about the
// instanton family on a ball.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sobolev/constants.hpp"
#include "sobolev/fields.hpp"
#include "sobolev/geometry.hpp"

namespace sobolev::experiments {

/// eps0 · 2^{-k}, k = 0..count-1.
std::vector<double> geometric_grid(double eps0, int count);

struct SweepResult {
  std::vector<double> eps_values;  // strictly decreasing
  std::vector<double> raw;
  std::vector<double> scaled;
  std::vector<double> fitted;      // Richardson-extrapolated value at each ε (first entry repeats scaled)
  double fitted_coefficient = 0.0;
  double fit_residual = 0.0;       // |last two extrapolants|
  double expected_coefficient = 0.0;
  bool truncated = false;          // quadrature failed at the small end
};

struct AppendixResult {
  SweepResult sweep;
  /// (raw - (B/2) ε^{1/t}) / ε^{1+1/t} per ε.
  std::vector<double> remainder;
  double remainder_max = 0.0;
  bool remainder_bounded = false;
};

/// |U_{ε,P}|_q^q for P on the boundary, scaled by ε^{1/t}; expects B(q,N)/2.
AppendixResult appendix_sweep(const geometry::BallDomain& dom, const constants::Exponents& exp,
                              const std::vector<double>& eps_grid, const numerics::QuadratureSpec& spec);

struct CurvatureResult {
  SweepResult sweep;              // scaled = (S/2^{2/N} - β₀)/ε, expected = 2^{(N-2)/N} S A(N) H
  double intercept_rel_error = 0.0;  // |β₀(ε_min) - S/2^{2/N}| / (S/2^{2/N})
  /// √(N(N-2)): ratio between U_{ε,P}'s concentration length and ε.
  double concentration_scale = 0.0;
  /// Fitted slope per unit of concentration length, fitted / concentration_scale.
  double normalized_slope = 0.0;
};

/// β₀(U) = |∇U|²/|U|_{2*}² for boundary instantons on a ball of radius R.
CurvatureResult curvature_slope(const geometry::BallDomain& dom, const std::vector<double>& eps_grid,
                                const numerics::QuadratureSpec& spec);

struct CalculusCheck {
  bool pass = false;
  long samples = 0;
  long violations = 0;
  double worst_margin = 0.0;  // min (LHS - RHS) / max(1, LHS)
  double worst_x = 0.0;
};

/// Samples (1+x)^q >= 1 + (qt/2)|x|^{2/t} - q|x| over x >= -1.
CalculusCheck calculus_lemma_check(double q, double t, long samples, std::uint64_t seed);

struct EigenResiduals {
  double res_U = 0.0;
  double res_dU = 0.0;
  double order_U = 0.0;
  double order_dU = 0.0;
  // same quantities on the uniform mesh at M
  double res_U_uniform = 0.0;
  double res_dU_uniform = 0.0;
};

inline constexpr double kEigenGrading = 4.0;

/// Grid residuals of the radial equations satisfied by U (μ = 1) and by
/// g = U' (μ = 2* - 1) on [0, R_trunc], sinh-graded toward r = 0; orders
/// from M → 2M.
EigenResiduals eigen_residuals(int M, double R_trunc, int N, double grading = kEigenGrading);

/// Residual maxima alone at a single resolution.
std::pair<double, double> eigen_residual_max(int M, double R_trunc, int N, double grading = 0.0);

/// Trial family U_{ε,P} + d, P on the boundary, as a two-parameter box.
struct FamilySpec {
  double eps_min_rel = 1e-4;  // smallest ε as a fraction of R
  int eps_starts = 4;         // multistart grid along log ε
};

struct FieldParams {
  double eps = 0.0;
  double c = 1.0;
  double d = 0.0;
  double theta = 0.0;        // mixing weight in the optimizer box
  bool constant = false;     // pure constant field
};

struct Alpha0Report {
  int N = 5;
  double q = 0.0;
  double a = 1.0;
  double R = 1.0;
  std::optional<double> lb_constant_test;
  double lb_curvature = 0.0;
  double lb_variational = 0.0;
  double boundary_limit = 0.0;  // critical α of U_{ε_min,P}
  FieldParams best_field;
  std::vector<std::pair<double, double>> s_alpha_curve;
  bool s_alpha_monotone = true;
  double bisection_estimate = 0.0;
  double bisection_rel_diff = 0.0;
  std::vector<bool> start_converged;
};

Alpha0Report estimate_alpha0(const geometry::BallDomain& dom, const constants::Exponents& exp, double a,
                             const numerics::OptimizerSpec& opt, const numerics::QuadratureSpec& quad,
                             const std::vector<double>& alpha_grid, const FamilySpec& family = {},
                             bool run_bisection = true);

struct S0Gap {
  double s0_estimate = 0.0;
  double threshold = 0.0;
  double relative_gap = 0.0;
  FieldParams best_field;
  /// Family-min restricted to pure instantons (d = 0).
  double instanton_only_min = 0.0;
  double instanton_only_gap = 0.0;
  std::vector<bool> start_converged;
};

S0Gap s0_gap(const geometry::BallDomain& dom, const constants::Exponents& exp, double a,
             const numerics::OptimizerSpec& opt, const numerics::QuadratureSpec& quad,
             const FamilySpec& family = {});

/// Family-min of Ψ_α over the trial family.
double family_min_psi(const geometry::BallDomain& dom, const constants::Exponents& exp, double a,
                      double alpha, const numerics::OptimizerSpec& opt, const numerics::QuadratureSpec& quad,
                      const FamilySpec& family = {});

/// The profile field at a given point of the optimizer box.
fields::ProfileField family_member(const geometry::BallDomain& dom, const constants::Exponents& exp, double a,
                                   double log_eps, double theta);

}  // namespace sobolev::experiments
