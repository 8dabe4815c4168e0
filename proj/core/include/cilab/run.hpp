#pragma once

#include <string>
#include <vector>

#include "cilab/config.hpp"

namespace cilab {

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 config, 3 estimate failure, 4 stall
  std::string status;
  std::vector<std::string> outputs;
};

/// Executes one experiment: deterministic for a fixed (config, seed) pair,
/// artifacts under config.out_dir, manifest.json always written.
RunResult run(const RunConfig& config);

}  // namespace cilab
