#pragma once

#include <string>
#include <vector>

#include "gdsq/jsonout.hpp"

namespace gdsq {

bool known_subcommand(const std::string& subcommand);
const std::vector<std::string>& subcommand_list();

// Structural validation before any computation: required fields, types,
// ranges, and no unknown keys. Throws Error naming the field path, e.g.
// "config.map.A[0][1] must be a number".
void validate_config(const std::string& subcommand, const Json& config);

// JSON parse with a clear error, then validate_config.
Json parse_config(const std::string& text, const std::string& subcommand);

}  // namespace gdsq
