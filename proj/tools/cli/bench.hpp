// Batch solving of generated games, summarized per spec row.
#pragma once

#include <iosfwd>
#include <string>

namespace efg::cli {

struct BenchOptions {
  std::string spec;
  std::string out;
  std::string instances_out;
  int workers = 1;
};

// Spec document:
// {"rows": [{"family": "A", "n": 3, "branching": [2,3,3], "m": [1,1,2],
//            "layers": 1, "instances": 10, "methods": ["logm", "cqpm"],
//            "refinement": "nash", "seed": 0, "max_iters": 100000,
//            "timeout_s": 0, "t_min": 1e-5}]}
// Only family, n and branching are required.
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);

}  // namespace efg::cli
