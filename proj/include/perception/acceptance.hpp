#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace perception {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

constexpr int kCriterionCount = 10;

// Runs one criterion (1..10) on an n-cell grid.
CriterionResult run_criterion(int id, std::size_t n = 2000);
std::vector<CriterionResult> run_acceptance(std::size_t n = 2000);

// "[PASS]  3  efficiency worked example  (1.2s)  detail"
std::string format_result(const CriterionResult& r);

}  // namespace perception
