#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace funreg::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_numeric = 3;

//! Name of the environment variable holding the default output directory.
inline constexpr const char* output_dir_env = "FUNREG_OUTPUT_DIR";

//! Runs one command line (args[0] is the program name). Normal output goes
//! to `out`, diagnostics to `err`; the return value is the exit code.
int
run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace funreg::cli
