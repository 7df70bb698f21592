#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "sobolev/constants.hpp"
#include "sobolev/geometry.hpp"

namespace sobolev::fields {

class DegenerateFieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// u = c·U_{ε,P} + d on a ball, with the H¹ weight a in ‖u‖² = |∇u|² + a|u|².
struct ProfileField {
  geometry::BallDomain dom;
  double c = 1.0;
  geometry::Instanton inst;
  double d = 0.0;
  constants::Exponents exponents;
  double a = 1.0;

  void validate() const;
  double value(double r) const;  // r = |x - P|
};

/// Radial samples on 0 = r_0 < ... < r_M = R (M >= 16).
struct RadialGridField {
  geometry::BallDomain dom;
  std::vector<double> nodes;
  std::vector<double> values;
  double a = 1.0;  // a = 0 is admitted for pure -Δ residual checks
  constants::Exponents exponents;

  void validate() const;
};

RadialGridField make_uniform_grid_field(const geometry::BallDomain& dom, const constants::Exponents& exp,
                                        double a, int M, const std::function<double(double)>& f);

using Field = std::variant<ProfileField, RadialGridField>;

/// Raw integrals of a field; everything else is derived from these.
struct FieldNorms {
  double grad_sq = 0.0;   // |∇u|_2²
  double l2_sq = 0.0;     // |u|_2²
  double crit_pow = 0.0;  // |u|_{2*}^{2*}
  double q_pow = 0.0;     // |u|_q^q for the exponent family's q
  std::map<double, double> lp;  // extra p ↦ |u|_p
  double a = 1.0;
  constants::Exponents exponents;

  double norm_sq() const { return grad_sq + a * l2_sq; }
  double crit() const;
};

FieldNorms norms(const ProfileField& f, std::span<const double> q_list, const numerics::QuadratureSpec& spec);
FieldNorms norms(const RadialGridField& f, std::span<const double> q_list);
FieldNorms norms(const Field& f, std::span<const double> q_list, const numerics::QuadratureSpec& spec);

/// Outcome of solving Ψ_α(u) >= S/2^{2/N} for α.
struct CriticalAlpha {
  enum class Kind { value, absent, unbounded };
  Kind kind = Kind::absent;
  double value = 0.0;

  bool has_value() const { return kind == Kind::value; }
};

struct FunctionalReport {
  double alpha = 0.0;
  double grad_sq = 0.0;
  double l2_sq = 0.0;
  double norm_H1_sq = 0.0;
  std::map<double, double> lp;
  double q_norm = 0.0;  // |u|_q
  double crit = 0.0;    // |u|_{2*}
  double beta = 0.0;
  double delta = 0.0;
  double psi = 0.0;
  double phi = 0.0;
  double tau = 0.0;
  CriticalAlpha crit_alpha;
};

/// S / 2^{2/N}.
double threshold(int N);

FunctionalReport functionals(const FieldNorms& n, double alpha);
FunctionalReport functionals(const Field& f, double alpha, const numerics::QuadratureSpec& spec);

CriticalAlpha critical_alpha(const FieldNorms& n);
CriticalAlpha critical_alpha(const Field& f, const numerics::QuadratureSpec& spec);

/// Residual of the Euler system for the constant function c on Ω.
double euler_residual_constant(double c, double alpha, const constants::Exponents& exp, double a,
                               const geometry::BallDomain& dom);

/// Pointwise residual of the Euler system with Neumann closure at both ends.
std::vector<double> euler_residual_radial(const RadialGridField& f, double alpha);

/// v(x) = κ^{(N-2)/2} u(κx) on Ω/κ, with weight aκ².
ProfileField rescale(const ProfileField& f, double kappa);

}  // namespace sobolev::fields
