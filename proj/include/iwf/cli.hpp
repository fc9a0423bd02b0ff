#pragma once

#include <iosfwd>

namespace iwf {

/// Entry point of the iwfsim tool. Returns the process exit status:
/// 0 on success, 2 for usage errors or invalid configuration, 1 for other
/// failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iwf
