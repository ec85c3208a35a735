#pragma once

#include <cstddef>
#include <vector>

#include "simdist/box.hpp"

namespace simdist {

struct AnchorLevel {
  double stride = 8.0;
  double base_size = 8.0;
};

struct AnchorSpec {
  std::vector<AnchorLevel> levels;
  std::vector<double> scales;
  std::vector<double> ratios;  // h / w
  double center_offset = 0.5;

  /// Strides 4..64 with base_size = stride, one scale, ratios {0.5, 1, 2}.
  static AnchorSpec default_spec();

  void validate() const;
};

/// Per-level grid shape; anchors of a level occupy a contiguous range.
struct LevelLayout {
  std::size_t offset = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t count(std::size_t per_cell) const noexcept { return rows * cols * per_cell; }
};

struct AnchorGrid {
  std::vector<CBox> anchors;
  std::vector<std::size_t> per_level_counts;
  std::vector<LevelLayout> layouts;
  std::size_t scales_per_cell = 0;
  std::size_t ratios_per_cell = 0;
  ImageSize image_size;

  std::size_t anchors_per_cell() const noexcept { return scales_per_cell * ratios_per_cell; }

  /// Flat index of an anchor given its level, cell and shape indices.
  std::size_t index_of(std::size_t level, std::size_t row, std::size_t col, std::size_t scale,
                       std::size_t ratio) const noexcept {
    const LevelLayout& l = layouts[level];
    return l.offset + ((row * l.cols + col) * scales_per_cell + scale) * ratios_per_cell + ratio;
  }
};

/// Dense anchors, level-major then row-major, then scale, then ratio.
/// Anchors crossing the image border are kept.
AnchorGrid build_grid(const AnchorSpec& spec, ImageSize image_size);

}  // namespace simdist
