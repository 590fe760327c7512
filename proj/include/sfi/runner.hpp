#pragma once

#include "sfi/config.hpp"

namespace sfi {

// Dispatches a parsed config to the pipelines and writes CSV artifacts into
// the output directory (env STABLEFISHER_OUTDIR > config `out` > cwd).
// Returns the process exit status:
//   0 success, 1 unsatisfied verify report, 2 config error, 3 numeric failure.
int run(const RunConfig& cfg);

}  // namespace sfi
