#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "simdist/anchors.hpp"
#include "simdist/assigner.hpp"
#include "simdist/calibration.hpp"
#include "simdist/dataset.hpp"
#include "simdist/metrics.hpp"

namespace simdist::report {

/// Where SimD's (m, n) come from.
struct CalibrateFromDataset {};
using NormSource = std::variant<std::monostate, CalibrateFromDataset, std::string, NormParams>;

struct MetricConfig {
  MetricKind kind = MetricKind::iou;
  NormSource norm_params;                // required for simd
  std::optional<double> dotd_scale;      // nullopt = "auto" (dotd_scale of the dataset)
  double nwd_constant = 12.8;
  double rfd_beta = 1.0;
  NormMode norm_mode = NormMode::both;
};

struct NmsConfig {
  std::string detections;
  MetricKind metric = MetricKind::iou;
  double threshold = 0.5;
  bool class_aware = true;
};

struct RunConfig {
  std::optional<std::string> dataset;
  std::optional<SynthOptions> synthetic;
  AnchorSpec anchors = AnchorSpec::default_spec();
  Thresholds thresholds;
  MetricConfig metric;
  std::vector<std::size_t> calibration_levels;
  double calibration_subsample = 1.0;
  std::size_t threads = 1;
  std::size_t compare_samples = 1000;  // 0 = every gt x anchor pair
  NmsConfig nms;
  std::string out_dir = ".";
  std::uint64_t seed = 0;

  /// Everything except the output directory, as written into report headers.
  nlohmann::json to_json() const;
};

/// Throws Error(Errc::config) naming the offending field.
RunConfig parse_config(const nlohmann::json& doc);

/// Requires exactly one dataset source.
void require_dataset_source(const RunConfig& config);

}  // namespace simdist::report
