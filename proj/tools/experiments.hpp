#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rbit::tools {

/// Runs one experiment subcommand; args excludes the program name.
/// Exit codes: 0 ok, 1 runtime error, 2 usage or configuration error,
/// 3 fixture violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Expands `--config FILE` into `--key value` tokens (key=value lines, '#'
/// comments). Throws rbit::ConfigError for malformed lines.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

} // namespace rbit::tools
