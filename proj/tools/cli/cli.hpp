// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it in-process.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace efg::cli {

enum ExitCode {
  kOk = 0,
  kError = 1,        // usage, I/O or parse failure
  kInvalidGame = 2,  // validate: structural or perfect-recall violation
  kTraceFailed = 3,  // solve: the path tracer did not reach t_min
  kNotVerified = 4,  // solve/verify: the equilibrium check failed
};

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace efg::cli
