#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hhga::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (without the program name). Returns 0 when
/// everything certified or held, 1 when a violation or failing bound was
/// found, 2 on usage, validation, parse or domain errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Splits a printed replay line into arguments: whitespace separates,
/// single quotes group. The leading program name is dropped.
std::vector<std::string> split_command_line(const std::string& line);

}  // namespace hhga::cli
