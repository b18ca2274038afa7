// Full acceptance run: one line per numbered criterion, nonzero exit if any
// criterion fails. Thresholds and tolerances live next to each criterion in
// the library implementation.

#include <cstdio>

#include "phi4/acceptance.hpp"

int main() {
  auto results = phi4::run_acceptance_suite();
  bool all_pass = true;
  for (const auto& r : results) {
    std::printf("criterion %2d [%-26s]: %s  (%s) [%.1fs]\n", r.id, r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    all_pass = all_pass && r.pass;
  }
  std::printf("acceptance: %zu criteria, %s\n", results.size(), all_pass ? "all pass" : "FAIL");
  return all_pass ? 0 : 1;
}
