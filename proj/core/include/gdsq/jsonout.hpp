#pragma once

#include <nlohmann/json.hpp>
#include <string>

namespace gdsq {

using Json = nlohmann::ordered_json;

// Report serializer with floating-point formatting pinned to 17 significant
// digits. Identical structures give byte-identical text, which is the
// determinism contract for emitted reports. Non-finite numbers are refused.
std::string dump_deterministic(const Json& j, int indent = 2);

void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace gdsq
