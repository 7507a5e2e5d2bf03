#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qkd/config.hpp"

namespace qkd::cli {

enum class Command { Rate, SweepMu, Surface, OptimalMu, OptimalMuCurve, CompareEstimates, MonteCarlo };

std::string_view to_string(Command command);
std::optional<Command> parse_command(std::string_view name);

struct RunFlags {
  bool plot = false;
  unsigned threads = 0;
};

/// Executes one subcommand. Tables and CSV go to `config.output.path` when set,
/// otherwise to `out`; diagnostics go to `err`. Returns the process exit code.
int run(Command command, const ScenarioConfig& config, const RunFlags& flags, std::ostream& out,
        std::ostream& err);

/// Command-line entry point: parses argv (subcommand plus flags), loads the
/// config file, applies flag overrides and calls run().
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qkd::cli
