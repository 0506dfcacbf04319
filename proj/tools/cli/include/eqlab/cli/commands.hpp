#pragma once

#include <string>

#include "eqlab/cli/run_config.hpp"

namespace eqlab::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Rendered output of a command. exit_code is nonzero iff some requested
/// row failed; the text still holds every row that succeeded.
struct CommandResult {
    std::string text;
    int exit_code = 0;
};

CommandResult run_scan(const RunConfig& config);
CommandResult run_volumes(const RunConfig& config);
CommandResult run_correction(const RunConfig& config);
CommandResult run_orbit(const RunConfig& config);
CommandResult run_counterexample(const RunConfig& config);

/// Dispatches on config.command.
CommandResult run_command(const RunConfig& config);

/// Lines after the `#` header block: the part that must be reproducible.
std::string data_section(const std::string& text);

/// %.17g, with nan/inf spelled out.
std::string format_number(double value);

} // namespace eqlab::cli
