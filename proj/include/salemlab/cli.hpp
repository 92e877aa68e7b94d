#pragma once

// Command-line front end. Every subcommand prints a JSON report on stdout;
// with --out DIR it also writes its artifacts and a manifest.json there.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical error.

#include <iosfwd>
#include <string>
#include <vector>

namespace salemlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerification = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

const char* tool_version();

}  // namespace salemlab::cli
