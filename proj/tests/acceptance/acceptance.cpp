#include "suites.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
  std::uint64_t seed = 1;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  int failed = 0;
  for (const suites::SuiteInfo& info : suites::suite_list()) {
    suites::SuiteResult r = suites::run_suite(info.name, seed);
    const bool ok = r.pass();
    std::printf("[%s] %ld %-10s %s (%.1f s)\n", ok ? "PASS" : "FAIL", r.number, r.name.c_str(), r.title.c_str(),
                r.seconds);
    if (!ok) {
      ++failed;
      if (!r.error.empty()) std::printf("    error: %s\n", r.error.c_str());
      for (const suites::Claim& c : r.claims) {
        if (c.pass) continue;
        std::printf("    failed: %s: measured [%.6g, %.6g] %s target %.6g\n", c.name.c_str(), c.measured.lower_d(),
                    c.measured.upper_d(), c.relation.c_str(), c.target.to_ball().to_double());
      }
    }
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, suites::suite_list().size());
  return failed == 0 ? 0 : 1;
}
