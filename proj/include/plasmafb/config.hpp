#pragma once

// Flat key=value run configuration ('#' comments, unknown keys rejected).

#include <filesystem>
#include <string>

#include "plasmafb/functional.hpp"

namespace pfb {

ProblemConfig parse_config_text(const std::string& text);
ProblemConfig parse_config_file(const std::filesystem::path& path);

Grid grid_from_config(const ProblemConfig& cfg);

}  // namespace pfb
