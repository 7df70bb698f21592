#pragma once

#include <string>

#include "sobolev/numerics.hpp"

namespace sobolev::constants {

/// Exponent family for dimension N and subcritical exponent q in [2#, 2♭].
struct Exponents {
  int N = 5;
  double q = 0.0;
  double two_star = 0.0;   // 2N/(N-2)
  double two_sharp = 0.0;  // 2N/(N-1)
  double two_flat = 0.0;   // 2(N-1)/(N-2)
  double s = 0.0;
  double t = 0.0;
  /// Set when N < 5: the formulas are evaluated but the theory does not apply.
  bool theory_out_of_range = false;
};

enum class QKeyword { two_sharp, two_flat, midpoint };

struct ExponentOptions {
  bool allow_low_dimension = false;  // admit N in {3, 4}
};

/// Throws RangeError (naming [2#, 2♭]) for q outside the admissible interval
/// and DomainError for N outside the supported range.
Exponents make_exponents(int N, double q, ExponentOptions options = {});
Exponents make_exponents(int N, QKeyword q, ExponentOptions options = {});

QKeyword parse_q_keyword(const std::string& name);  // throws DomainError
std::string to_string(QKeyword k);

struct ConstantsTable {
  double S = 0.0;
  double S_pow_N2 = 0.0;
  double omega_N = 0.0;
  double B = 0.0;
  double A = 0.0;
  double threshold = 0.0;  // S / 2^{2/N}
};

/// Area of the unit sphere S^{N-1}.
double sphere_area(int N);
double sobolev_constant_pow(int N);  // S^{N/2}
double instanton_qnorm_closed_form(int N, double q);  // B(q,N) = ∫_{R^N} U^q
double curvature_coefficient(int N);                  // A(N)

ConstantsTable closed_form_constants(const Exponents& exp);

/// ω_N ∫_0^∞ U'(r)² r^{N-1} dr by quadrature.
double oracle_instanton_energy(int N, const numerics::QuadratureSpec& spec);
/// ω_N ∫_0^∞ U(r)^q r^{N-1} dr by quadrature; q > N/(N-2).
double oracle_instanton_qnorm(int N, double q, const numerics::QuadratureSpec& spec);

}  // namespace sobolev::constants
