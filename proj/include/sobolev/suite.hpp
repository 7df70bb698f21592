#pragma once

// The acceptance criteria as a reusable list of checks, shared by the `all`
// command and the acceptance test binary.

#include <cstdint>
#include <string>
#include <vector>

#include "sobolev/numerics.hpp"

namespace sobolev::suite {

struct Criterion {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;              // measured values, deterministic
  std::vector<std::string> info;   // extra diagnostics that do not affect pass
  double seconds = 0.0;            // wall time; kept out of reports
  double time_limit = 0.0;         // 0 = none
};

struct SuiteOptions {
  std::uint64_t seed = 42;
  long calculus_samples = 1000000;
  numerics::QuadratureSpec quad;
  numerics::OptimizerSpec opt{1e-6, 1e-10, 400, 2};
};

Criterion closed_form_vs_oracle(const SuiteOptions& o);
Criterion exponent_identities(const SuiteOptions& o);
Criterion qnorm_asymptotics(const SuiteOptions& o);
Criterion curvature_expansion(const SuiteOptions& o);
Criterion calculus_inequality(const SuiteOptions& o);
Criterion eigen_residuals(const SuiteOptions& o);
Criterion functional_identities(const SuiteOptions& o);
Criterion constant_solution(const SuiteOptions& o);
Criterion strict_gap(const SuiteOptions& o);
Criterion alpha0_consistency(const SuiteOptions& o);

/// Runs every criterion in order; the last entry also carries the total
/// runtime bound of the whole suite.
std::vector<Criterion> run_all(const SuiteOptions& o);

}  // namespace sobolev::suite
