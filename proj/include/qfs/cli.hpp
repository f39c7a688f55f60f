#pragma once

namespace qfs {

// Full command-line interface (subcommands: risk, balance, pick, decohere).
// Returns the process exit code: 0 success, 2 malformed input or usage,
// 3 numerical failure (post-selection abort, singular system),
// 1 unexpected internal error.
int run_cli(int argc, const char* const* argv);

}  // namespace qfs
