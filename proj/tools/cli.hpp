#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace perception::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,     // verify found a failing criterion, or an unexpected error
  kExitSchema = 2,      // bad arguments or scenario
  kExitInfeasible = 3,  // numerically infeasible request
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace perception::cli
