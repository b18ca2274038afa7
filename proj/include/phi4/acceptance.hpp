#pragma once

#include <string>
#include <vector>

namespace phi4 {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the numbered acceptance criteria (all of them when ids is empty).
/// Every criterion is deterministic given the built-in seeds.
std::vector<CriterionResult> run_acceptance_suite(const std::vector<int>& ids = {});

/// Thread cap: PHI4_THREADS when set, hardware concurrency otherwise.
int thread_cap();

}  // namespace phi4
