#pragma once

#include <ostream>

namespace astroknn {

/// Entry point of the `astroknn` tool. Returns the process exit code:
/// 0 iff every output was written.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace astroknn
