#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "csop/cli/config.hpp"
#include "csop/cli/table.hpp"

namespace csop::cli {

/// Dispatches to the owning module. Deterministic for a given config.
ResultTable run(const RunConfig& cfg);

/// Whole command line: `csop <subcommand> [--config FILE] [--set key=value]...
/// [--format csv|json] [--output FILE]`. Returns the process exit code:
/// 0 success, 1 configuration, 2 numerical precondition, 3 convergence.
int run_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csop::cli
