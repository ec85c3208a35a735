#include "simdist/anchors.hpp"

#include <cmath>

#include "simdist/error.hpp"
#include "simdist/io.hpp"

namespace simdist {

AnchorSpec AnchorSpec::default_spec() {
  AnchorSpec spec;
  for (const double stride : {4.0, 8.0, 16.0, 32.0, 64.0}) {
    spec.levels.push_back({stride, stride});
  }
  spec.scales = {1.0};
  spec.ratios = {0.5, 1.0, 2.0};
  return spec;
}

void AnchorSpec::validate() const {
  if (levels.empty() || scales.empty() || ratios.empty()) {
    throw Error(Errc::invalid_argument, "anchor spec needs at least one level, scale and ratio");
  }
  for (const AnchorLevel& l : levels) {
    if (!(l.stride > 0.0) || !(l.base_size > 0.0) || !std::isfinite(l.stride) ||
        !std::isfinite(l.base_size)) {
      throw Error(Errc::invalid_argument, "anchor strides and base sizes must be positive");
    }
  }
  for (const double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(Errc::invalid_argument, "anchor scales must be positive, got " + format_double(s));
    }
  }
  for (const double r : ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw Error(Errc::invalid_argument, "anchor ratios must be positive, got " + format_double(r));
    }
  }
  if (!(center_offset >= 0.0 && center_offset <= 1.0)) {
    throw Error(Errc::invalid_argument, "anchor center offset must lie in [0, 1]");
  }
}

AnchorGrid build_grid(const AnchorSpec& spec, ImageSize image_size) {
  spec.validate();
  if (!(image_size.width > 0.0) || !(image_size.height > 0.0) ||
      !std::isfinite(image_size.width) || !std::isfinite(image_size.height)) {
    throw Error(Errc::invalid_argument, "image size must be positive, got " +
                                            format_double(image_size.width) + "x" +
                                            format_double(image_size.height));
  }

  AnchorGrid grid;
  grid.image_size = image_size;
  grid.scales_per_cell = spec.scales.size();
  grid.ratios_per_cell = spec.ratios.size();

  // Shape per (scale, ratio) is the same on every cell of a level.
  std::vector<double> widths;
  std::vector<double> heights;
  std::size_t total = 0;
  for (const AnchorLevel& level : spec.levels) {
    LevelLayout layout;
    layout.offset = total;
    layout.cols = static_cast<std::size_t>(std::ceil(image_size.width / level.stride));
    layout.rows = static_cast<std::size_t>(std::ceil(image_size.height / level.stride));
    grid.layouts.push_back(layout);
    grid.per_level_counts.push_back(layout.count(grid.anchors_per_cell()));
    total += grid.per_level_counts.back();
  }
  grid.anchors.reserve(total);

  for (std::size_t li = 0; li < spec.levels.size(); ++li) {
    const AnchorLevel& level = spec.levels[li];
    const LevelLayout& layout = grid.layouts[li];
    widths.clear();
    heights.clear();
    for (const double scale : spec.scales) {
      const double size = level.base_size * scale;
      for (const double ratio : spec.ratios) {
        const double root = std::sqrt(ratio);
        widths.push_back(size / root);
        heights.push_back(size * root);
      }
    }
    for (std::size_t row = 0; row < layout.rows; ++row) {
      const double cy = (static_cast<double>(row) + spec.center_offset) * level.stride;
      for (std::size_t col = 0; col < layout.cols; ++col) {
        const double cx = (static_cast<double>(col) + spec.center_offset) * level.stride;
        for (std::size_t k = 0; k < widths.size(); ++k) {
          grid.anchors.emplace_back(cx, cy, widths[k], heights[k]);
        }
      }
    }
  }
  return grid;
}

}  // namespace simdist
