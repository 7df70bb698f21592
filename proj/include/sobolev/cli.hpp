#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "sobolev/constants.hpp"
#include "sobolev/numerics.hpp"

namespace sobolev::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Bad flag, bad value or missing command.  `usage` holds the help text.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& what, std::string usage) : std::runtime_error(what), usage_(std::move(usage)) {}
  const std::string& usage() const noexcept { return usage_; }

 private:
  std::string usage_;
};

/// --help / --version; the text is the full message to print.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { constants, eval, appendix, curvature, calculus, eigen, alpha0, s0, all };
enum class Format { json, csv };

std::string to_string(Command c);
std::string to_string(Format f);

struct RunConfig {
  Command command = Command::all;
  int N = 5;
  std::string q = "two_flat";  // keyword or decimal
  double a = 1.0;
  double R = 1.0;
  double alpha = 1.0;
  double eps0 = 0.1;
  int eps_count = 8;
  numerics::QuadratureSpec quad;
  numerics::OptimizerSpec opt{1e-6, 1e-10, 400, 2};
  std::uint64_t seed = 42;
  long samples = 1000000;
  int M = 512;
  double R_trunc = 50.0;
  double kappa = 0.0;  // > 0 adds the scaling check to alpha0
  std::string field;   // eval: inline JSON or @path
  std::string output;  // empty = stdout
  Format format = Format::json;
  bool allow_low_dimension = false;
  std::string config_path;
};

/// Parses command-line arguments (without the program name).  A `--config`
/// key=value file is read first; flags given on the command line win.
RunConfig parse_config(const std::vector<std::string>& args);

/// q resolved through the keyword table or as a number in [2#, 2♭].
constants::Exponents resolve_exponents(const RunConfig& cfg);

/// The resolved configuration as embedded in every report.
nlohmann::json config_json(const RunConfig& cfg);

struct Report {
  nlohmann::json json;  // {config, results, invariant_failures, version}
  std::vector<std::vector<double>> csv_rows;  // parameter, raw, scaled, fitted
  bool pass() const { return json.at("invariant_failures").empty(); }
};

/// Runs the configured experiment.  Experiment errors are caught and recorded
/// as invariant failures.
Report build_report(const RunConfig& cfg);

std::string render_csv(const Report& r);

/// build_report plus output; returns the process exit status (0 pass,
/// 1 failed invariant).
int run(const RunConfig& cfg, std::ostream& out);

/// Full entry point: parse, run, map errors to exit status 2.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sobolev::cli
