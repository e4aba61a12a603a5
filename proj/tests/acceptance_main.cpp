// One line per acceptance criterion; nonzero exit if any fails.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "perception/acceptance.hpp"

int main(int argc, char** argv) {
  std::size_t n = 2000;
  if (argc > 1) n = std::stoul(argv[1]);
  int failed = 0;
  for (int id = 1; id <= perception::kCriterionCount; ++id) {
    const auto r = perception::run_criterion(id, n);
    std::printf("%s\n", perception::format_result(r).c_str());
    std::fflush(stdout);
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d/%d criteria passed\n", perception::kCriterionCount - failed, perception::kCriterionCount);
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
