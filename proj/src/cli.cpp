#include "sobolev/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string_view>

#include "CLI11.hpp"

#include "sobolev/experiments.hpp"
#include "sobolev/fields.hpp"
#include "sobolev/geometry.hpp"
#include "sobolev/suite.hpp"

namespace sobolev::cli {

using nlohmann::json;

namespace {

const std::map<std::string, Command> kCommands{
    {"constants", Command::constants}, {"eval", Command::eval},   {"appendix", Command::appendix},
    {"curvature", Command::curvature}, {"calculus", Command::calculus}, {"eigen", Command::eigen},
    {"alpha0", Command::alpha0},       {"s0", Command::s0},       {"all", Command::all}};

bool has_sweep(Command c) {
  return c == Command::appendix || c == Command::curvature || c == Command::alpha0;
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [name, cmd] : kCommands) {
    if (cmd == c) return name;
  }
  return "?";
}

std::string to_string(Format f) { return f == Format::json ? "json" : "csv"; }

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Sobolev-critical Neumann problem on a ball: closed forms, asymptotics and alpha_0 bounds",
               "sobolev"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string command;
  std::string format = "json";
  std::string commands_help = "one of:";
  for (const auto& [name, cmd] : kCommands) commands_help += " " + name;
  app.add_option("command", command, commands_help);
  app.add_option("--N", cfg.N, "dimension")->capture_default_str();
  app.add_option("--q", cfg.q, "exponent: number or two_sharp|two_flat|midpoint")->capture_default_str();
  app.add_option("--a", cfg.a, "weight of |u|^2 in the H^1 norm")->capture_default_str();
  app.add_option("--R", cfg.R, "ball radius")->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "coupling for eval")->capture_default_str();
  app.add_option("--eps0", cfg.eps0, "largest eps of the sweep grid")->capture_default_str();
  app.add_option("--eps_count", cfg.eps_count, "number of halvings in the sweep grid")->capture_default_str();
  app.add_option("--abs_tol", cfg.quad.abs_tol, "quadrature absolute tolerance")->capture_default_str();
  app.add_option("--rel_tol", cfg.quad.rel_tol, "quadrature relative tolerance")->capture_default_str();
  app.add_option("--max_subdivisions", cfg.quad.max_subdivisions)->capture_default_str();
  app.add_option("--param_tol", cfg.opt.param_tol, "optimizer parameter tolerance")->capture_default_str();
  app.add_option("--value_tol", cfg.opt.value_tol, "optimizer value tolerance")->capture_default_str();
  app.add_option("--max_iters", cfg.opt.max_iters, "optimizer iterations per start")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--samples", cfg.samples, "calculus samples per (N, q)")->capture_default_str();
  app.add_option("--M", cfg.M, "eigen grid size")->capture_default_str();
  app.add_option("--R_trunc", cfg.R_trunc, "eigen truncation radius")->capture_default_str();
  app.add_option("--kappa", cfg.kappa, "alpha0: also check the scaling law at this kappa")->capture_default_str();
  app.add_option("--field", cfg.field, "eval: field as JSON text or @file");
  app.add_option("--output", cfg.output, "report path (default stdout)");
  app.add_option("--format", format, "json or csv")->capture_default_str();
  app.add_flag("--allow_low_dimension", cfg.allow_low_dimension, "admit N = 3, 4");

  if (args.empty()) throw UsageError("no command given", app.help());

  std::vector<std::string> storage{"sobolev"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested(std::string(kVersion) + "\n");
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what(), app.help());
  }

  const auto it = kCommands.find(command);
  if (command.empty()) throw UsageError("no command given", app.help());
  if (it == kCommands.end()) throw UsageError("unknown command '" + command + "'", app.help());
  cfg.command = it->second;
  if (format == "json") {
    cfg.format = Format::json;
  } else if (format == "csv") {
    cfg.format = Format::csv;
  } else {
    throw UsageError("bad value for --format: '" + format + "'", app.help());
  }
  if (cfg.format == Format::csv && !has_sweep(cfg.command)) {
    throw UsageError("--format csv needs a sweep command (appendix, curvature, alpha0)", app.help());
  }
  if (auto* opt = app.get_option("--config"); opt->count() > 0) cfg.config_path = opt->as<std::string>();
  if (cfg.eps_count < 2) throw UsageError("--eps_count must be at least 2", app.help());
  if (cfg.samples < 1) throw UsageError("--samples must be positive", app.help());
  if (cfg.command == Command::eval && cfg.field.empty()) throw UsageError("eval needs --field", app.help());
  cfg.quad.validate();
  cfg.opt.validate();
  resolve_exponents(cfg);
  return cfg;
}

constants::Exponents resolve_exponents(const RunConfig& cfg) {
  const constants::ExponentOptions opts{cfg.allow_low_dimension};
  if (auto v = parse_number(cfg.q)) return constants::make_exponents(cfg.N, *v, opts);
  return constants::make_exponents(cfg.N, constants::parse_q_keyword(cfg.q), opts);
}

json config_json(const RunConfig& cfg) {
  return json{{"command", to_string(cfg.command)},
              {"N", cfg.N},
              {"q", cfg.q},
              {"a", cfg.a},
              {"R", cfg.R},
              {"alpha", cfg.alpha},
              {"eps_grid", {{"eps0", cfg.eps0}, {"count", cfg.eps_count}}},
              {"quadrature",
               {{"abs_tol", cfg.quad.abs_tol},
                {"rel_tol", cfg.quad.rel_tol},
                {"max_subdivisions", cfg.quad.max_subdivisions},
                {"tail_cutoff", cfg.quad.tail_cutoff}}},
              {"optimizer",
               {{"param_tol", cfg.opt.param_tol},
                {"value_tol", cfg.opt.value_tol},
                {"max_iters", cfg.opt.max_iters},
                {"restarts", cfg.opt.restarts}}},
              {"seed", cfg.seed},
              {"samples", cfg.samples},
              {"M", cfg.M},
              {"R_trunc", cfg.R_trunc},
              {"kappa", cfg.kappa},
              {"field", cfg.field},
              {"output", cfg.output},
              {"format", to_string(cfg.format)},
              {"allow_low_dimension", cfg.allow_low_dimension}};
}

namespace {

using constants::Exponents;
using geometry::BallDomain;

struct Context {
  const RunConfig& cfg;
  json& results;
  std::vector<std::string>& failures;
  std::vector<std::vector<double>>& rows;

  void check(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

json exponents_json(const Exponents& e) {
  return {{"N", e.N},           {"q", e.q},         {"s", e.s},
          {"t", e.t},           {"two_star", e.two_star}, {"two_sharp", e.two_sharp},
          {"two_flat", e.two_flat}, {"theory_out_of_range", e.theory_out_of_range}};
}

json sweep_json(const experiments::SweepResult& s) {
  return {{"eps", s.eps_values},
          {"raw", s.raw},
          {"scaled", s.scaled},
          {"fitted", s.fitted},
          {"fitted_coefficient", s.fitted_coefficient},
          {"fit_residual", s.fit_residual},
          {"expected_coefficient", s.expected_coefficient},
          {"truncated", s.truncated}};
}

void add_rows(Context& ctx, const experiments::SweepResult& s) {
  for (std::size_t i = 0; i < s.eps_values.size(); ++i) {
    ctx.rows.push_back({s.eps_values[i], s.raw[i], s.scaled[i], s.fitted[i]});
  }
}

json critical_alpha_json(const fields::CriticalAlpha& c) {
  switch (c.kind) {
    case fields::CriticalAlpha::Kind::value:
      return c.value;
    case fields::CriticalAlpha::Kind::absent:
      return "absent";
    case fields::CriticalAlpha::Kind::unbounded:
      return "unbounded";
  }
  return nullptr;
}

json field_params_json(const experiments::FieldParams& p) {
  return {{"eps", p.eps}, {"c", p.c}, {"d", p.d}, {"theta", p.theta}, {"constant", p.constant}};
}

void run_constants(Context& ctx) {
  const auto e = resolve_exponents(ctx.cfg);
  const auto t = constants::closed_form_constants(e);
  const double energy = constants::oracle_instanton_energy(e.N, ctx.cfg.quad);
  const double qnorm = constants::oracle_instanton_qnorm(e.N, e.q, ctx.cfg.quad);
  const double r_energy = std::abs(energy / t.S_pow_N2 - 1.0);
  const double r_qnorm = std::abs(qnorm / t.B - 1.0);
  ctx.results["constants"] = {
      {"exponents", exponents_json(e)},
      {"S", t.S},
      {"S_pow_N2", t.S_pow_N2},
      {"omega_N", t.omega_N},
      {"B", t.B},
      {"A", t.A},
      {"threshold", t.threshold},
      {"oracle", {{"energy", energy}, {"energy_rel_residual", r_energy}, {"qnorm", qnorm}, {"qnorm_rel_residual", r_qnorm}}}};
  ctx.check(r_energy < 1e-8, "constants: energy oracle residual >= 1e-8");
  ctx.check(r_qnorm < 1e-8, "constants: q-norm oracle residual >= 1e-8");
}

json read_field_json(const std::string& text) {
  if (!text.empty() && text.front() == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw DomainError("eval: cannot open field file '" + text.substr(1) + "'");
    return json::parse(in);
  }
  return json::parse(text);
}

void run_eval(Context& ctx) {
  const json f = read_field_json(ctx.cfg.field);
  RunConfig local = ctx.cfg;
  local.N = f.value("N", local.N);
  local.R = f.value("R", local.R);
  local.a = f.value("a", local.a);
  local.alpha = f.value("alpha", local.alpha);
  if (f.contains("q")) local.q = f["q"].is_string() ? f["q"].get<std::string>() : f["q"].dump();
  const auto e = resolve_exponents(local);
  const BallDomain dom{local.N, local.R};
  const std::string type = f.value("type", std::string("profile"));

  fields::Field field;
  if (type == "profile") {
    fields::ProfileField p;
    p.dom = dom;
    p.exponents = e;
    p.a = local.a;
    p.c = f.value("c", 1.0);
    p.d = f.value("d", 0.0);
    p.inst = {local.N, f.value("eps", 1.0), f.value("rho_P", local.R)};
    field = p;
  } else if (type == "grid") {
    const auto values = f.at("values").get<std::vector<double>>();
    if (values.size() < 17) throw DomainError("eval: grid field needs at least 17 values");
    fields::RadialGridField g;
    g.dom = dom;
    g.exponents = e;
    g.a = local.a;
    g.values = values;
    g.nodes.resize(values.size());
    const std::size_t M = values.size() - 1;
    for (std::size_t i = 0; i <= M; ++i) g.nodes[i] = i == M ? dom.R : dom.R * static_cast<double>(i) / M;
    field = g;
  } else {
    throw DomainError("eval: unknown field type '" + type + "'");
  }

  const auto r = fields::functionals(field, local.alpha, ctx.cfg.quad);
  ctx.results["eval"] = {{"field", f},
                         {"exponents", exponents_json(e)},
                         {"alpha", r.alpha},
                         {"grad_sq", r.grad_sq},
                         {"l2_sq", r.l2_sq},
                         {"norm_H1_sq", r.norm_H1_sq},
                         {"q_norm", r.q_norm},
                         {"crit_norm", r.crit},
                         {"beta", r.beta},
                         {"delta", r.delta},
                         {"psi", r.psi},
                         {"phi", r.phi},
                         {"tau", r.tau},
                         {"critical_alpha", critical_alpha_json(r.crit_alpha)},
                         {"threshold", fields::threshold(local.N)}};
}

std::vector<double> sweep_grid(const RunConfig& cfg) { return experiments::geometric_grid(cfg.eps0, cfg.eps_count); }

void run_appendix(Context& ctx) {
  const auto e = resolve_exponents(ctx.cfg);
  const auto r = experiments::appendix_sweep({ctx.cfg.N, ctx.cfg.R}, e, sweep_grid(ctx.cfg), ctx.cfg.quad);
  const double dev = std::abs(r.sweep.fitted_coefficient / r.sweep.expected_coefficient - 1.0);
  ctx.results["appendix"] = {{"exponents", exponents_json(e)},
                             {"sweep", sweep_json(r.sweep)},
                             {"remainder", r.remainder},
                             {"remainder_max", r.remainder_max},
                             {"remainder_bounded", r.remainder_bounded},
                             {"fitted_rel_deviation", dev}};
  add_rows(ctx, r.sweep);
  ctx.check(!r.sweep.truncated, "appendix: sweep truncated by quadrature failure");
  ctx.check(dev < 0.02, "appendix: fitted coefficient not within 2% of B(q,N)/2");
  ctx.check(r.remainder_bounded, "appendix: remainder not bounded across the sweep");
}

void run_curvature(Context& ctx) {
  const auto grid = sweep_grid(ctx.cfg);
  json per_R = json::array();
  std::vector<double> slope_R;
  double dev_first = 0.0;
  for (double factor : {1.0, 2.0, 4.0}) {
    const double R = ctx.cfg.R * factor;
    const auto r = experiments::curvature_slope({ctx.cfg.N, R}, grid, ctx.cfg.quad);
    const double dev = std::abs(r.sweep.fitted_coefficient / r.sweep.expected_coefficient - 1.0);
    if (factor == 1.0) {
      dev_first = dev;
      add_rows(ctx, r.sweep);
    }
    slope_R.push_back(r.sweep.fitted_coefficient * R);
    per_R.push_back({{"R", R},
                     {"sweep", sweep_json(r.sweep)},
                     {"slope_rel_deviation", dev},
                     {"intercept_rel_error", r.intercept_rel_error},
                     {"concentration_scale", r.concentration_scale},
                     {"normalized_slope", r.normalized_slope}});
  }
  const auto [mn, mx] = std::minmax_element(slope_R.begin(), slope_R.end());
  const double spread = (*mx - *mn) / *mn;
  ctx.results["curvature"] = {{"radii", per_R}, {"slope_times_R_spread", spread}};
  ctx.check(dev_first < 0.05, "curvature: fitted slope not within 5% of 2^{(N-2)/N} S A(N) H");
  ctx.check(spread < 0.05, "curvature: slope does not scale as 1/R within 5%");
}

void run_calculus(Context& ctx) {
  const auto e = resolve_exponents(ctx.cfg);
  const auto r = experiments::calculus_lemma_check(e.q, e.t, ctx.cfg.samples, ctx.cfg.seed);
  ctx.results["calculus"] = {{"exponents", exponents_json(e)},
                             {"pass", r.pass},
                             {"samples", r.samples},
                             {"violations", r.violations},
                             {"worst_margin", r.worst_margin},
                             {"worst_x", r.worst_x}};
  ctx.check(r.pass && r.worst_margin >= -1e-12, "calculus: inequality violated");
}

void run_eigen(Context& ctx) {
  const auto r = experiments::eigen_residuals(ctx.cfg.M, ctx.cfg.R_trunc, ctx.cfg.N);
  ctx.results["eigen"] = {{"M", ctx.cfg.M},
                          {"R_trunc", ctx.cfg.R_trunc},
                          {"grading", experiments::kEigenGrading},
                          {"res_U", r.res_U},
                          {"res_dU", r.res_dU},
                          {"order_U", r.order_U},
                          {"order_dU", r.order_dU},
                          {"res_U_uniform", r.res_U_uniform},
                          {"res_dU_uniform", r.res_dU_uniform}};
  ctx.check(r.res_U <= 1e-4, "eigen: U residual above 1e-4");
  ctx.check(r.res_dU <= 1e-3, "eigen: U' residual above 1e-3");
  ctx.check(std::abs(r.order_U - 2.0) <= 0.2 && std::abs(r.order_dU - 2.0) <= 0.2,
            "eigen: observed order outside 2 +/- 0.2");
}

json alpha0_json(const experiments::Alpha0Report& r) {
  json curve = json::array();
  for (const auto& [a, v] : r.s_alpha_curve) curve.push_back({{"alpha", a}, {"S_alpha", v}});
  return {{"N", r.N},
          {"q", r.q},
          {"a", r.a},
          {"R", r.R},
          {"lb_constant_test", r.lb_constant_test ? json(*r.lb_constant_test) : json(nullptr)},
          {"lb_curvature", r.lb_curvature},
          {"lb_variational", r.lb_variational},
          {"boundary_limit", r.boundary_limit},
          {"best_field", field_params_json(r.best_field)},
          {"s_alpha_curve", curve},
          {"s_alpha_monotone", r.s_alpha_monotone},
          {"bisection_estimate", r.bisection_estimate},
          {"bisection_rel_diff", r.bisection_rel_diff},
          {"start_converged", r.start_converged}};
}

void run_alpha0(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto e = resolve_exponents(cfg);
  const std::vector<double> alphas{0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
  const auto r = experiments::estimate_alpha0({cfg.N, cfg.R}, e, cfg.a, cfg.opt, cfg.quad, alphas);
  json out = alpha0_json(r);
  const double thr = fields::threshold(cfg.N);
  for (const auto& [a, v] : r.s_alpha_curve) ctx.rows.push_back({a, v, v / thr, std::nan("")});

  const double lb_ref = std::max(r.lb_curvature, r.lb_constant_test.value_or(0.0));
  ctx.check(r.lb_variational >= (1.0 - 1e-2) * lb_ref, "alpha0: lb_variational below the analytic lower bounds");
  ctx.check(r.bisection_rel_diff <= 1e-3, "alpha0: bisection and direct estimates differ by more than 1e-3");
  ctx.check(r.s_alpha_monotone, "alpha0: S_alpha not nondecreasing");
  if (cfg.kappa > 0) {
    const auto s = experiments::estimate_alpha0({cfg.N, cfg.R / cfg.kappa}, e, cfg.a * cfg.kappa * cfg.kappa, cfg.opt,
                                                cfg.quad, {});
    const double defect = std::abs(s.lb_variational / (cfg.kappa * r.lb_variational) - 1.0);
    out["scaling"] = {{"kappa", cfg.kappa}, {"scaled", alpha0_json(s)}, {"rel_defect", defect}};
    ctx.check(defect <= 1e-2, "alpha0: kappa-scaling law off by more than 1%");
  }
  ctx.results["alpha0"] = out;
}

void run_s0(Context& ctx) {
  const auto e = resolve_exponents(ctx.cfg);
  const auto r = experiments::s0_gap({ctx.cfg.N, ctx.cfg.R}, e, ctx.cfg.a, ctx.cfg.opt, ctx.cfg.quad);
  ctx.results["s0"] = {{"s0_estimate", r.s0_estimate},
                       {"threshold", r.threshold},
                       {"relative_gap", r.relative_gap},
                       {"best_field", field_params_json(r.best_field)},
                       {"instanton_only_min", r.instanton_only_min},
                       {"instanton_only_gap", r.instanton_only_gap},
                       {"start_converged", r.start_converged}};
  ctx.check(r.s0_estimate > 0, "s0: estimate not positive");
  ctx.check(r.relative_gap > 1e-3, "s0: relative gap below 1e-3");
}

void run_all(Context& ctx) {
  suite::SuiteOptions o;
  o.seed = ctx.cfg.seed;
  o.calculus_samples = ctx.cfg.samples;
  o.quad = ctx.cfg.quad;
  o.opt = ctx.cfg.opt;
  json list = json::array();
  for (const auto& c : suite::run_all(o)) {
    list.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}, {"info", c.info}});
    ctx.check(c.pass, "criterion " + std::to_string(c.id) + ": " + c.name);
  }
  ctx.results["all"] = list;
}

}  // namespace

Report build_report(const RunConfig& cfg) {
  Report rep;
  json results = json::object();
  std::vector<std::string> failures;
  Context ctx{cfg, results, failures, rep.csv_rows};
  const std::string name = to_string(cfg.command);
  try {
    switch (cfg.command) {
      case Command::constants: run_constants(ctx); break;
      case Command::eval: run_eval(ctx); break;
      case Command::appendix: run_appendix(ctx); break;
      case Command::curvature: run_curvature(ctx); break;
      case Command::calculus: run_calculus(ctx); break;
      case Command::eigen: run_eigen(ctx); break;
      case Command::alpha0: run_alpha0(ctx); break;
      case Command::s0: run_s0(ctx); break;
      case Command::all: run_all(ctx); break;
    }
  } catch (const std::exception& e) {
    results[name] = {{"failed", true}, {"error", e.what()}};
    failures.push_back(name + ": " + e.what());
  }
  rep.json = {{"config", config_json(cfg)}, {"results", results}, {"invariant_failures", failures}, {"version", kVersion}};
  return rep;
}

std::string render_csv(const Report& r) {
  std::ostringstream os;
  os << "parameter,raw,scaled,fitted\n";
  char buf[32];
  for (const auto& row : r.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (std::isfinite(row[i])) os << std::string_view(buf, std::to_chars(buf, buf + sizeof buf, row[i]).ptr);
    }
    os << '\n';
  }
  return os.str();
}

int run(const RunConfig& cfg, std::ostream& out) {
  const Report rep = build_report(cfg);
  const std::string body = cfg.format == Format::json ? rep.json.dump(2) + "\n" : render_csv(rep);
  if (cfg.output.empty()) {
    out << body;
  } else {
    std::ofstream f(cfg.output);
    if (!f) throw std::runtime_error("cannot write '" + cfg.output + "'");
    f << body;
    // Sweep data goes next to a JSON report as <stem>.csv.
    if (cfg.format == Format::json && !rep.csv_rows.empty()) {
      std::string path = cfg.output;
      const auto dot = path.find_last_of('.');
      const auto slash = path.find_last_of('/');
      if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) path.erase(dot);
      std::ofstream c(path + ".csv");
      c << render_csv(rep);
    }
  }
  return rep.pass() ? 0 : 1;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << e.usage();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    return run(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace sobolev::cli
