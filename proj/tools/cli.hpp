#pragma once

namespace stumpscope {

/// Entry point of the `stumpscope` executable. Returns the process exit
/// code: 0 success, 1 invalid invocation, 2 data error.
int run_cli(int argc, const char* const* argv);

}  // namespace stumpscope
