#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace horizonwave::cli {

/// Parses the TOML subset used by scenario files: `key = value` pairs,
/// `[table]` / `[table.sub]` headers, basic strings, numbers, booleans and
/// flat arrays, `#` comments. Throws ValidationError with the line number.
nlohmann::json parse_config(const std::string& text);
nlohmann::json load_config(const std::filesystem::path& path);

}  // namespace horizonwave::cli
