#pragma once

#include <string>

#include "gdsq/jsonout.hpp"

namespace gdsq {

// 0 = pass/complete, 2 = check failed, 3 = inconclusive. Usage and config
// errors are thrown as Error and map to exit 1 in the CLI.
struct RunArtifacts {
    int exit_code = 0;
    Json report;
    std::string csv;  // empty when the subcommand has no tabular output
    std::string svg;  // empty unless requested and applicable
};

RunArtifacts run_command(const std::string& subcommand, const Json& config, bool want_svg = false);

}  // namespace gdsq
