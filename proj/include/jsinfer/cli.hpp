#pragma once

namespace jsinfer {

/// Entry point for the jsinfer command-line tool. Returns the process exit
/// code: 0 success, 1 validation failures or internal errors, 2 usage,
/// 3 I/O, 4 malformed data.
int run_cli(int argc, const char* const* argv);

}  // namespace jsinfer
