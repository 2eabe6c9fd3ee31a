#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eim {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2 };

/// Entry point shared by the `eim` binary and the tests. args excludes the
/// program name. Subcommands: decompose, dct, propagate, sweep, spectra,
/// truncate.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eim
