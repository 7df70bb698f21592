#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sobolev/cli.hpp"

using namespace sobolev;
using namespace sobolev::cli;

TEST_CASE("parse: command and flags") {
  const auto cfg = parse_config({"alpha0", "--N", "5", "--q", "two_flat", "--a", "1"});
  CHECK(cfg.command == Command::alpha0);
  CHECK(cfg.N == 5);
  CHECK(cfg.q == "two_flat");
  CHECK(cfg.a == 1.0);
  CHECK(cfg.R == 1.0);
  CHECK(cfg.seed == 42);
  CHECK(cfg.format == Format::json);

  const auto num = parse_config({"calculus", "--q", "2.6"});
  CHECK(resolve_exponents(num).q == doctest::Approx(2.6));
}

TEST_CASE("parse: errors") {
  try {
    parse_config({"alpha0", "--N", "5", "--q", "9.9"});
    FAIL("expected RangeError");
  } catch (const RangeError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("[2#, 2b] = [2.5, 2.666") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config({}), UsageError);
  try {
    parse_config({"constants", "--bogus", "1"});
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("--bogus") != std::string::npos);
    CHECK(e.usage().find("Usage") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config({"frobnicate"}), UsageError);
  CHECK_THROWS_AS(parse_config({"constants", "--N", "five"}), UsageError);
  CHECK_THROWS_AS(parse_config({"constants", "--format", "xml"}), UsageError);
  CHECK_THROWS_AS(parse_config({"constants", "--format", "csv"}), UsageError);
  CHECK_THROWS_AS(parse_config({"eval"}), UsageError);
  CHECK_THROWS_AS(parse_config({"constants", "--N", "4"}), DomainError);
  CHECK(parse_config({"constants", "--N", "4", "--allow_low_dimension"}).N == 4);
}

TEST_CASE("parse: config file values yield to flags") {
  const std::string path = "cli_test_config.txt";
  {
    std::ofstream f(path);
    f << "N=6\nq=two_sharp\nseed=7\nsamples=2000\n";
  }
  const auto cfg = parse_config({"calculus", "--config", path, "--N", "5"});
  CHECK(cfg.N == 5);
  CHECK(cfg.q == "two_sharp");
  CHECK(cfg.seed == 7);
  CHECK(cfg.samples == 2000);
  CHECK(cfg.config_path == path);
  {
    std::ofstream f(path);
    f << "unknown_key=1\n";
  }
  CHECK_THROWS_AS(parse_config({"calculus", "--config", path}), UsageError);
  std::remove(path.c_str());
}

TEST_CASE("reports are complete and deterministic") {
  const auto cfg = parse_config({"constants", "--N", "5"});
  const auto r = build_report(cfg);
  CHECK(r.pass());
  const auto& j = r.json;
  CHECK(j.at("version") == kVersion);
  CHECK(j.at("config").at("N") == 5);
  CHECK(j.at("config").at("command") == "constants");
  const auto& c = j.at("results").at("constants");
  CHECK(c.at("oracle").at("energy_rel_residual").get<double>() < 1e-8);
  CHECK(c.at("oracle").at("qnorm_rel_residual").get<double>() < 1e-8);
  CHECK(c.contains("omega_N"));
  CHECK(c.contains("threshold"));
  CHECK(build_report(cfg).json.dump() == j.dump());

  const auto calc = build_report(parse_config({"calculus", "--N", "5", "--samples", "20000"}));
  CHECK(calc.pass());
  CHECK(calc.json.at("results").at("calculus").at("worst_margin").get<double>() >= -1e-12);
  CHECK(build_report(parse_config({"calculus", "--N", "5", "--samples", "20000"})).json.dump() == calc.json.dump());
}

TEST_CASE("eval and error serialization") {
  const auto ok = build_report(parse_config(
      {"eval", "--field", R"({"type":"profile","N":5,"R":1,"a":1,"q":"two_flat","c":0,"eps":0.1,"rho_P":1,"d":1,"alpha":0})"}));
  CHECK(ok.pass());
  const auto& e = ok.json.at("results").at("eval");
  CHECK(e.at("psi").get<double>() == doctest::Approx(e.at("beta").get<double>()));

  const auto bad = build_report(parse_config({"eval", "--field", R"({"type":"profile","c":0,"d":0})"}));
  CHECK_FALSE(bad.pass());
  CHECK(bad.json.at("results").at("eval").at("failed") == true);

  const auto garbled = build_report(parse_config({"eval", "--field", "{not json"}));
  CHECK_FALSE(garbled.pass());
}

TEST_CASE("csv rows and entry-point exit codes") {
  const auto cfg = parse_config({"appendix", "--format", "csv", "--eps0", "0.05", "--eps_count", "3"});
  const auto r = build_report(cfg);
  CHECK(r.csv_rows.size() == 3);
  const std::string csv = render_csv(r);
  CHECK(csv.rfind("parameter,raw,scaled,fitted\n", 0) == 0);

  std::ostringstream out, err;
  CHECK(main_entry({}, out, err) != 0);
  CHECK(err.str().find("Usage") != std::string::npos);
  std::ostringstream out2, err2;
  CHECK(main_entry({"eigen", "--N", "6"}, out2, err2) == 0);
  CHECK(nlohmann::json::parse(out2.str()).at("invariant_failures").empty());
  std::ostringstream out3, err3;
  CHECK(main_entry({"--help"}, out3, err3) == 0);
}
