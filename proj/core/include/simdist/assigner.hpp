#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "simdist/dataset.hpp"
#include "simdist/metrics.hpp"

namespace simdist {

struct Thresholds {
  double pos = 0.7;
  double neg = 0.3;
  double min_pos = 0.3;

  /// 0 <= neg <= pos <= 1 and 0 <= min_pos <= 1.
  void validate() const;
};

/// Per-anchor tag: a gt index for positives, or one of two sentinels.
class AnchorLabel {
 public:
  static constexpr std::int32_t kNegative = -1;
  static constexpr std::int32_t kIgnore = -2;

  static AnchorLabel positive(std::size_t gt) { return AnchorLabel(static_cast<std::int32_t>(gt)); }
  static AnchorLabel negative() { return AnchorLabel(kNegative); }
  static AnchorLabel ignore() { return AnchorLabel(kIgnore); }

  bool is_positive() const noexcept { return value_ >= 0; }
  bool is_negative() const noexcept { return value_ == kNegative; }
  bool is_ignore() const noexcept { return value_ == kIgnore; }
  std::size_t gt() const noexcept { return static_cast<std::size_t>(value_); }
  std::int32_t raw() const noexcept { return value_; }

  friend bool operator==(AnchorLabel, AnchorLabel) = default;

 private:
  explicit AnchorLabel(std::int32_t v) : value_(v) {}
  std::int32_t value_;
};

struct GtBest {
  std::size_t anchor = 0;
  double score = 0.0;

  friend bool operator==(const GtBest&, const GtBest&) = default;
};

struct AssignmentResult {
  std::vector<AnchorLabel> anchor_labels;
  std::vector<std::size_t> gt_match_counts;
  std::vector<GtBest> gt_best;
  std::vector<std::uint8_t> gt_fallback;  // 1 when the gt's positive came from the fallback pass

  std::size_t threshold_positives(std::size_t gt) const noexcept {
    return gt_match_counts[gt] - gt_fallback[gt];
  }

  friend bool operator==(const AssignmentResult&, const AssignmentResult&) = default;
};

/// Max-score threshold assignment with a low-quality fallback.
///
/// Each anchor takes its best gt (lowest index on ties): score > pos is
/// positive, score < neg negative, anything else ignored. Then every gt left
/// without positives may claim one Negative/Ignore anchor scoring > min_pos.
/// Claims are served best-first by (score desc, gt asc, anchor asc); a gt that
/// loses its best anchor to a stronger claim moves on to its next-best free
/// anchor. Threshold positives are never relabeled.
AssignmentResult assign(const MetricMatrix& matrix, const Thresholds& thresholds);

struct BucketStats {
  std::size_t gt_count = 0;
  std::size_t positives = 0;
  std::size_t unmatched = 0;            // zero positives after fallback
  std::size_t threshold_unmatched = 0;  // zero positives from thresholds alone
  double best_score_sum = 0.0;

  std::optional<double> mean_positives() const;
  std::optional<double> unmatched_fraction() const;
  std::optional<double> threshold_unmatched_fraction() const;
  std::optional<double> mean_best_score() const;

  void merge(const BucketStats& other) noexcept;
};

class MatchStats {
 public:
  const BucketStats& operator[](SizeBucket b) const noexcept {
    return buckets_[static_cast<std::size_t>(b)];
  }
  BucketStats& operator[](SizeBucket b) noexcept { return buckets_[static_cast<std::size_t>(b)]; }

  BucketStats total() const noexcept;
  void merge(const MatchStats& other) noexcept;

 private:
  std::array<BucketStats, kSizeBucketCount> buckets_{};
};

/// Per-size-bucket positives summary. Errc::invalid_argument when `gts` does
/// not match the result's gt count.
MatchStats match_stats(const AssignmentResult& result, std::span<const CBox> gts);

}  // namespace simdist
