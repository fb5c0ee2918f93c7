#pragma once

#include <iosfwd>

namespace gridcodec {

/// Entry point of the `gridcodec` command-line tool. Returns the process
/// exit code; diagnostics go to `err`, summaries and help to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gridcodec
