#pragma once

#include <filesystem>
#include <string>

#include "astroknn/geometry.hpp"

namespace astroknn {

/// Canonical layout JSON text:
/// {"astrobots":[{"id","l1","l2","x","y"}...],"neighbors":{"id":[ids]},"pitch":p}
std::string layout_to_json(const SwarmLayout& layout, int indent = -1);
SwarmLayout layout_from_json(const std::string& text);

void save_layout(const SwarmLayout& layout, const std::filesystem::path& path);
SwarmLayout load_layout(const std::filesystem::path& path);

/// FNV-1a 64 over the compact canonical JSON, as 16 lowercase hex digits.
std::string layout_fingerprint(const SwarmLayout& layout);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace astroknn
