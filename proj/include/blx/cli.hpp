#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "blx/io.hpp"

namespace blx {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Parses "pi/4", "pi", "3*pi/8", "0.5*pi" or a plain decimal.
double parse_omega(std::string_view text);

/// Runs the experiment described by an echoed config object (the "config"
/// member of any report). This is what every subcommand calls after parsing
/// its flags, so a report's config is sufficient to regenerate it.
RunReport execute(const nlohmann::ordered_json& config);

/// Subcommands: simulate, forecast, backtest, compare, rerun.
int cli_main(const std::vector<std::string>& args);
int cli_main(int argc, char** argv);

}  // namespace blx
