#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "simdist/box.hpp"
#include "simdist/nms.hpp"

namespace simdist {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// {"m", "n", "pair_count", "source_tag"}
std::string norm_params_to_json(const NormParams& params);
NormParams parse_norm_params(std::string_view text);
NormParams load_norm_params(const std::filesystem::path& path);

/// Rows of {"bbox": [cx, cy, w, h], "score", "category_id"}.
std::vector<Detection> parse_detections(std::string_view text);
std::string detections_to_json(std::span<const Detection> dets);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace simdist
