// Prints one PASS/FAIL line per acceptance criterion; exit status is the
// number of failures (capped).

#include <cstdio>
#include <cstdlib>
#include <string>

#include "sobolev/suite.hpp"

int main(int argc, char** argv) {
  sobolev::suite::SuiteOptions opts;
  if (argc > 1) opts.seed = std::strtoull(argv[1], nullptr, 10);

  const auto results = sobolev::suite::run_all(opts);
  int failures = 0;
  double total = 0.0;
  for (const auto& c : results) {
    std::printf("[%s] criterion %2d: %s | %s (%.1f s)\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.detail.c_str(), c.seconds);
    for (const auto& line : c.info) std::printf("       info: %s\n", line.c_str());
    if (!c.pass) ++failures;
    total += c.seconds;
  }
  std::printf("%d/%zu criteria passed, %.1f s total\n", static_cast<int>(results.size()) - failures, results.size(),
              total);
  std::fflush(stdout);
  return failures > 0 ? 1 : 0;
}
