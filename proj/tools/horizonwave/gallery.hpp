#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenario.hpp"

namespace horizonwave::cli {

struct GalleryEntry {
    std::string name;
    std::string description;
    /// Scenario file contents (same format as `horizonwave run`).
    std::string config;
    /// Scenario-specific checks beyond the generic [expect] table.
    std::function<void(RunContext&)> extra;
};

const std::vector<GalleryEntry>& gallery();
const GalleryEntry& gallery_entry(const std::string& name);

/// Runs one entry into out_dir; returns the report or throws CheckFailure.
nlohmann::json run_gallery(const GalleryEntry& entry, const std::filesystem::path& out_dir);

}  // namespace horizonwave::cli
