// Command-line front end. The logic lives here so tests can drive it
// without spawning processes.
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace monohire::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitArgument = 1;   // bad arguments, preconditions, invalid input
inline constexpr int kExitNumerical = 2;  // numerical or convergence failure

struct RunConfig {
    std::string command;
    // Option name (long flag without dashes) -> raw text. Flags override
    // values read from --config.
    std::map<std::string, std::string> values;
};

const std::vector<std::string>& command_names();
const std::vector<std::string>& option_names();

// Parses `key = value` lines; '#' starts a comment. Underscores in keys are
// read as dashes. Unknown or repeated keys throw ArgumentError.
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Executes one command. The one-line summary goes to `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// argv entry point: parses flags and --config, then calls run().
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace monohire::cli
