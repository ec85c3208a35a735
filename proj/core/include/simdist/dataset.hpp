#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "simdist/box.hpp"

namespace simdist {

struct GroundTruth {
  CBox box;
  std::int64_t category_id = 0;
};

struct ImageRecord {
  std::int64_t id = 0;
  std::string file_name;
  double width = 0.0;
  double height = 0.0;
  std::vector<GroundTruth> gts;

  std::vector<CBox> boxes() const;
};

struct Category {
  std::int64_t id = 0;
  std::string name;
};

struct AnnotationSet {
  std::vector<ImageRecord> images;
  std::vector<Category> categories;

  std::size_t gt_count() const noexcept;
};

/// Counts of repairs and oddities seen while ingesting a file.
struct IngestWarnings {
  std::size_t clamped_boxes = 0;       // non-positive extent raised to kMinIngestExtent
  std::size_t out_of_bounds_boxes = 0; // extends past the image by more than the margin

  bool any() const noexcept { return clamped_boxes + out_of_bounds_boxes > 0; }
  std::string summary() const;
};

inline constexpr double kMinIngestExtent = 1e-3;
inline constexpr double kBoundsMargin = 1.0;

/// Parses COCO-style JSON. Errors: Errc::parse for malformed JSON,
/// Errc::schema for wrong shapes or duplicate ids, Errc::dangling_reference
/// for annotations naming a missing image or category.
AnnotationSet parse_coco(std::string_view text, IngestWarnings* warnings = nullptr);

/// As parse_coco; Errc::io when the file cannot be read.
AnnotationSet load_coco(const std::filesystem::path& path, IngestWarnings* warnings = nullptr);

/// Inverse of parse_coco. `info` is embedded verbatim under the "info" key.
std::string write_coco(const AnnotationSet& set, std::string_view info_json = "{}");

enum class SizeBucket { below_range, very_tiny, tiny, small, medium, above_range };

inline constexpr std::size_t kSizeBucketCount = 6;
inline constexpr std::array<SizeBucket, kSizeBucketCount> kAllSizeBuckets = {
    SizeBucket::below_range, SizeBucket::very_tiny, SizeBucket::tiny,
    SizeBucket::small,       SizeBucket::medium,    SizeBucket::above_range};

const char* to_string(SizeBucket bucket) noexcept;

/// sqrt(w * h), the object size used for bucketing.
double box_scale(const CBox& box) noexcept;

/// Half-open buckets [2,8) [8,16) [16,32) [32,64) on box_scale.
SizeBucket size_bucket(const CBox& box) noexcept;

/// Square root of the mean ground-truth area. Errc::empty_input with no gts.
double dotd_scale(const AnnotationSet& set);

struct SynthOptions {
  std::size_t images = 10;
  ImageSize image_size{512.0, 512.0};
  double scale_min = 2.0;
  double scale_max = 8.0;
  std::size_t objects_per_image = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Random fully-contained boxes: scale uniform in [scale_min, scale_max],
/// h/w ratio uniform in [0.5, 2]. Equal options give identical sets.
AnnotationSet synth_dataset(const SynthOptions& options);

}  // namespace simdist
