#pragma once

#include <filesystem>
#include <vector>

#include "hqs/config.hpp"

namespace hqs {

struct RunOutcome {
  Json meta;                                // contents of meta.json
  std::vector<std::filesystem::path> files;  // everything written, meta.json last
};

/// Executes a configuration and writes its files into `out_dir` (the
/// configured output_dir when empty). `threads` parallelises Wigner rows and
/// sweep cells; results do not depend on it.
///
/// Throws ConfigError, ConvergenceError (rejected truncation, too many failed
/// sweep cells) or IoError.
RunOutcome run(const RunConfig& config, int threads = 1, std::filesystem::path out_dir = {});

}  // namespace hqs
