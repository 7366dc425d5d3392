#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitInvalid = 2;

/// Entry point of the `cpd` tool. args excludes the program name. Reports
/// without an --out path go to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

} // namespace cpd::cli
