#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bmcp::cli {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 2;     // unreadable input, bad flags or scenario
inline constexpr int kExitInfeasible = 3;    // moments outside a map's domain, no feasible split
inline constexpr int kExitInternal = 1;

inline constexpr int kSchemaVersion = 1;

// Runs `bmcp <args...>` (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bmcp::cli
