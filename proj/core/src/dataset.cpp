#include "simdist/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "simdist/calibration.hpp"
#include "simdist/error.hpp"
#include "simdist/io.hpp"

namespace simdist {

using nlohmann::json;

std::vector<CBox> ImageRecord::boxes() const {
  std::vector<CBox> out;
  out.reserve(gts.size());
  for (const GroundTruth& gt : gts) out.push_back(gt.box);
  return out;
}

std::size_t AnnotationSet::gt_count() const noexcept {
  std::size_t n = 0;
  for (const ImageRecord& img : images) n += img.gts.size();
  return n;
}

std::string IngestWarnings::summary() const {
  return "ingest warnings: " + std::to_string(clamped_boxes) + " degenerate box(es) clamped to " +
         format_double(kMinIngestExtent) + " px, " + std::to_string(out_of_bounds_boxes) +
         " box(es) outside image bounds";
}

namespace {

const json& require(const json& obj, const char* key, const char* where) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(Errc::schema, std::string(where) + " is missing \"" + key + "\"");
  }
  return *it;
}

std::int64_t require_id(const json& obj, const char* key, const char* where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) {
    throw Error(Errc::schema, std::string(where) + " field \"" + key + "\" must be an integer");
  }
  return v.get<std::int64_t>();
}

double require_number(const json& obj, const char* key, const char* where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) {
    throw Error(Errc::schema, std::string(where) + " field \"" + key + "\" must be a number");
  }
  return v.get<double>();
}

const json& optional_array(const json& root, const char* key) {
  static const json kEmpty = json::array();
  const auto it = root.find(key);
  if (it == root.end()) return kEmpty;
  if (!it->is_array()) {
    throw Error(Errc::schema, std::string("\"") + key + "\" must be an array");
  }
  return *it;
}

}  // namespace

AnnotationSet parse_coco(std::string_view text, IngestWarnings* warnings) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse, std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw Error(Errc::schema, "COCO document must be a JSON object");
  }
  if (!root.contains("images")) {
    throw Error(Errc::schema, "COCO document is missing \"images\"");
  }

  IngestWarnings local;
  AnnotationSet set;
  std::unordered_map<std::int64_t, std::size_t> image_index;

  for (const json& img : optional_array(root, "images")) {
    ImageRecord rec;
    rec.id = require_id(img, "id", "image");
    rec.width = require_number(img, "width", "image");
    rec.height = require_number(img, "height", "image");
    if (const auto it = img.find("file_name"); it != img.end() && it->is_string()) {
      rec.file_name = it->get<std::string>();
    }
    if (!(rec.width > 0.0) || !(rec.height > 0.0)) {
      throw Error(Errc::schema, "image " + std::to_string(rec.id) + " has a non-positive size");
    }
    if (!image_index.emplace(rec.id, set.images.size()).second) {
      throw Error(Errc::schema, "duplicate image id " + std::to_string(rec.id));
    }
    set.images.push_back(std::move(rec));
  }

  std::unordered_set<std::int64_t> category_ids;
  for (const json& cat : optional_array(root, "categories")) {
    Category c;
    c.id = require_id(cat, "id", "category");
    if (const auto it = cat.find("name"); it != cat.end() && it->is_string()) {
      c.name = it->get<std::string>();
    }
    if (!category_ids.insert(c.id).second) {
      throw Error(Errc::schema, "duplicate category id " + std::to_string(c.id));
    }
    set.categories.push_back(std::move(c));
  }

  for (const json& ann : optional_array(root, "annotations")) {
    const std::int64_t image_id = require_id(ann, "image_id", "annotation");
    const std::int64_t category_id = require_id(ann, "category_id", "annotation");
    const json& bbox = require(ann, "bbox", "annotation");
    if (!bbox.is_array() || bbox.size() != 4 ||
        !std::all_of(bbox.begin(), bbox.end(), [](const json& v) { return v.is_number(); })) {
      throw Error(Errc::schema, "annotation bbox must be an array of 4 numbers");
    }
    const auto img_it = image_index.find(image_id);
    if (img_it == image_index.end()) {
      throw Error(Errc::dangling_reference,
                  "annotation references missing image id " + std::to_string(image_id));
    }
    if (!category_ids.contains(category_id)) {
      throw Error(Errc::dangling_reference,
                  "annotation references missing category id " + std::to_string(category_id));
    }
    const double x = bbox[0].get<double>();
    const double y = bbox[1].get<double>();
    double w = bbox[2].get<double>();
    double h = bbox[3].get<double>();
    const double cx = x + w / 2.0;
    const double cy = y + h / 2.0;
    if (w <= 0.0 || h <= 0.0) {
      w = w <= 0.0 ? kMinIngestExtent : w;
      h = h <= 0.0 ? kMinIngestExtent : h;
      ++local.clamped_boxes;
    }
    ImageRecord& rec = set.images[img_it->second];
    const CBox box(cx, cy, w, h);
    if (box.x1() < -kBoundsMargin || box.y1() < -kBoundsMargin ||
        box.x2() > rec.width + kBoundsMargin || box.y2() > rec.height + kBoundsMargin) {
      ++local.out_of_bounds_boxes;
    }
    rec.gts.push_back({box, category_id});
  }

  if (warnings != nullptr) *warnings = local;
  return set;
}

AnnotationSet load_coco(const std::filesystem::path& path, IngestWarnings* warnings) {
  return parse_coco(read_text_file(path), warnings);
}

std::string write_coco(const AnnotationSet& set, std::string_view info_json) {
  json root;
  json images = json::array();
  json annotations = json::array();
  std::int64_t next_ann_id = 1;
  for (const ImageRecord& img : set.images) {
    images.push_back({{"id", img.id},
                      {"file_name", img.file_name},
                      {"width", img.width},
                      {"height", img.height}});
    for (const GroundTruth& gt : img.gts) {
      const CBox& b = gt.box;
      annotations.push_back({{"id", next_ann_id++},
                             {"image_id", img.id},
                             {"category_id", gt.category_id},
                             {"bbox", {b.cx() - b.w() / 2.0, b.cy() - b.h() / 2.0, b.w(), b.h()}},
                             {"area", b.w() * b.h()},
                             {"iscrowd", 0}});
    }
  }
  json categories = json::array();
  for (const Category& c : set.categories) {
    categories.push_back({{"id", c.id}, {"name", c.name}});
  }
  root["images"] = std::move(images);
  root["annotations"] = std::move(annotations);
  root["categories"] = std::move(categories);
  try {
    root["info"] = json::parse(info_json.begin(), info_json.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::invalid_argument, std::string("info block is not valid JSON: ") + e.what());
  }
  return root.dump(1) + "\n";
}

const char* to_string(SizeBucket bucket) noexcept {
  switch (bucket) {
    case SizeBucket::below_range: return "below_range";
    case SizeBucket::very_tiny: return "very_tiny";
    case SizeBucket::tiny: return "tiny";
    case SizeBucket::small: return "small";
    case SizeBucket::medium: return "medium";
    case SizeBucket::above_range: return "above_range";
  }
  return "below_range";
}

double box_scale(const CBox& box) noexcept { return std::sqrt(box.w() * box.h()); }

SizeBucket size_bucket(const CBox& box) noexcept {
  const double s = box_scale(box);
  if (s < 2.0) return SizeBucket::below_range;
  if (s < 8.0) return SizeBucket::very_tiny;
  if (s < 16.0) return SizeBucket::tiny;
  if (s < 32.0) return SizeBucket::small;
  if (s < 64.0) return SizeBucket::medium;
  return SizeBucket::above_range;
}

double dotd_scale(const AnnotationSet& set) {
  CompensatedSum area;
  std::size_t count = 0;
  for (const ImageRecord& img : set.images) {
    for (const GroundTruth& gt : img.gts) {
      area.add(gt.box.w() * gt.box.h());
      ++count;
    }
  }
  if (count == 0) {
    throw Error(Errc::empty_input, "DotD scale needs at least one ground truth");
  }
  return std::sqrt(area.value() / static_cast<double>(count));
}

void SynthOptions::validate() const {
  if (!(image_size.width > 0.0) || !(image_size.height > 0.0)) {
    throw Error(Errc::invalid_argument, "synthetic image size must be positive");
  }
  if (!(scale_min > 0.0) || !(scale_max >= scale_min) || !std::isfinite(scale_max)) {
    throw Error(Errc::invalid_argument, "synthetic scale range must satisfy 0 < min <= max");
  }
  // The widest box (ratio 0.5) is scale_max * sqrt(2) across.
  const double extent = scale_max * std::sqrt(2.0);
  if (extent > image_size.width || extent > image_size.height) {
    throw Error(Errc::invalid_argument,
                "synthetic scale range too large for full containment in a " +
                    format_double(image_size.width) + "x" + format_double(image_size.height) +
                    " image");
  }
}

AnnotationSet synth_dataset(const SynthOptions& options) {
  options.validate();
  std::mt19937_64 rng(options.seed);
  // Explicit conversion keeps the stream identical across standard libraries.
  const auto uniform = [&rng](double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  };

  AnnotationSet set;
  set.categories.push_back({1, "object"});
  set.images.reserve(options.images);
  const double W = options.image_size.width;
  const double H = options.image_size.height;
  for (std::size_t i = 0; i < options.images; ++i) {
    ImageRecord rec;
    rec.id = static_cast<std::int64_t>(i + 1);
    char name[32];
    std::snprintf(name, sizeof(name), "synth_%06zu.png", i + 1);
    rec.file_name = name;
    rec.width = W;
    rec.height = H;
    rec.gts.reserve(options.objects_per_image);
    for (std::size_t k = 0; k < options.objects_per_image; ++k) {
      const double scale = uniform(options.scale_min, options.scale_max);
      const double root = std::sqrt(uniform(0.5, 2.0));
      const double w = scale / root;
      const double h = scale * root;
      const double cx = uniform(w / 2.0, W - w / 2.0);
      const double cy = uniform(h / 2.0, H - h / 2.0);
      rec.gts.push_back({CBox(cx, cy, w, h), 1});
    }
    set.images.push_back(std::move(rec));
  }
  return set;
}

}  // namespace simdist
