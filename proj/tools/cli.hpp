#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mimix::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 2;
inline constexpr int exit_parameter_error = 3;
inline constexpr int exit_invariant_error = 4;

/// Runs the command line `args` (args[0] is the program name). Never throws;
/// failures map onto the exit codes above with a message on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mimix::cli
