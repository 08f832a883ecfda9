// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit status is nonzero when any
// computational criterion fails.

#include <chrono>
#include <cstdio>

#include "selfsim/verify.hpp"

int main() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<selfsim::CheckResult> results = selfsim::run_acceptance(42);
  bool pass = true;
  for (const auto& r : results) {
    std::printf("[%s] %s :: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    pass = pass && r.pass;
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s: %zu criteria in %.1f s\n", pass ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              results.size(), seconds);
  return pass ? 0 : 1;
}
