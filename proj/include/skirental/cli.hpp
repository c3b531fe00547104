#pragma once

#include <iosfwd>

namespace skirental {

/// Exit statuses of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;

/// Entry point of the `skirental` binary: decide, simulate, experiment,
/// fuse and adapt subcommands.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skirental
