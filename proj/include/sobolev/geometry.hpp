#pragma once

#include <functional>
#include <span>

#include "sobolev/numerics.hpp"

namespace sobolev::geometry {

/// Ball of radius R centred at the origin of R^N.
struct BallDomain {
  int N = 5;
  double R = 1.0;

  double volume() const;
  /// Mean curvature of the boundary sphere w.r.t. the outward normal.
  double mean_curvature() const { return 1.0 / R; }
  void validate() const;
};

/// Rescaled Talenti instanton U_{ε,P}; only |P| matters on a ball.
struct Instanton {
  int N = 5;
  double eps = 1.0;
  double center_dist = 0.0;  // ρ_P; equal to R for a boundary point

  void validate() const;
};

struct ProfileSample {
  double value;
  double radial_derivative;
};

/// U_{ε,P} and its derivative as functions of r = |x - P|.
ProfileSample instanton_profile(const Instanton& inst, double r);

/// (N-1)-measure of {x : |x - P| = r} ∩ B_R with |P| = rho_P.
double cap_density(const BallDomain& dom, double rho_P, double r);

/// ∫_Ω g(|x - P|) dx = ∫_0^{R+ρ_P} g(r) μ(r) dr.  `hints` are extra split
/// points for integrands concentrated at small r.
double ball_radial_integral(const BallDomain& dom, double rho_P, const std::function<double(double)>& g,
                            const numerics::QuadratureSpec& spec, std::span<const double> hints = {});

/// Component-wise ∫_0^{R+ρ_P} g_j(r) μ(r) dr with one cap-density evaluation
/// per abscissa.
std::vector<double> ball_radial_integrals(const BallDomain& dom, double rho_P, const numerics::VectorIntegrand& g,
                                          std::size_t components, const numerics::QuadratureSpec& spec,
                                          std::span<const double> hints = {});

/// Geometric split points eps * 4^k inside (0, limit).
std::vector<double> concentration_hints(double eps, double limit);

struct InstantonNorms {
  double q_norm_q;   // |U|_q^q over Ω
  double crit_norm;  // |U|_{2*}
  double l2_sq;      // |U|_2²
  double grad_sq;    // |∇U|_2²
};

InstantonNorms instanton_norms(const BallDomain& dom, const Instanton& inst, double q,
                               const numerics::QuadratureSpec& spec);

}  // namespace sobolev::geometry
