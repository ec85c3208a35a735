#include "simdist/assigner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "simdist/error.hpp"
#include "simdist/io.hpp"

namespace simdist {

void Thresholds::validate() const {
  const auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(pos) || !unit(neg) || !unit(min_pos) || neg > pos) {
    throw Error(Errc::invalid_argument, "thresholds must satisfy 0 <= neg <= pos <= 1 and "
                                        "0 <= min_pos <= 1, got pos=" +
                                            format_double(pos) + " neg=" + format_double(neg) +
                                            " min_pos=" + format_double(min_pos));
  }
}

namespace {

struct Claim {
  double score;
  std::size_t gt;
  std::size_t cursor;

  // Max-heap order: higher score first, then lower gt index.
  bool operator<(const Claim& o) const noexcept {
    if (score != o.score) return score < o.score;
    return gt > o.gt;
  }
};

}  // namespace

AssignmentResult assign(const MetricMatrix& matrix, const Thresholds& thresholds) {
  thresholds.validate();
  if (matrix.rows() == 0 || matrix.cols() == 0) {
    throw Error(Errc::empty_input, "cannot assign from an empty metric matrix");
  }
  const std::size_t num_gts = matrix.rows();
  const std::size_t num_anchors = matrix.cols();

  // Row-wise sweep of the per-anchor argmax; strict > keeps the lowest gt on ties.
  std::vector<double> anchor_best(matrix.row(0).begin(), matrix.row(0).end());
  std::vector<std::size_t> anchor_gt(num_anchors, 0);
  for (std::size_t g = 1; g < num_gts; ++g) {
    const auto row = matrix.row(g);
    for (std::size_t a = 0; a < num_anchors; ++a) {
      if (row[a] > anchor_best[a]) {
        anchor_best[a] = row[a];
        anchor_gt[a] = g;
      }
    }
  }

  AssignmentResult result;
  result.anchor_labels.reserve(num_anchors);
  result.gt_match_counts.assign(num_gts, 0);
  result.gt_fallback.assign(num_gts, 0);
  for (std::size_t a = 0; a < num_anchors; ++a) {
    if (anchor_best[a] > thresholds.pos) {
      result.anchor_labels.push_back(AnchorLabel::positive(anchor_gt[a]));
      ++result.gt_match_counts[anchor_gt[a]];
    } else if (anchor_best[a] < thresholds.neg) {
      result.anchor_labels.push_back(AnchorLabel::negative());
    } else {
      result.anchor_labels.push_back(AnchorLabel::ignore());
    }
  }

  result.gt_best.resize(num_gts);
  for (std::size_t g = 0; g < num_gts; ++g) {
    const auto row = matrix.row(g);
    GtBest best{0, row[0]};
    for (std::size_t a = 1; a < num_anchors; ++a) {
      if (row[a] > best.score) best = {a, row[a]};
    }
    result.gt_best[g] = best;
  }

  // Fallback: candidate lists per unmatched gt, sorted by (score desc, anchor asc).
  std::vector<std::vector<std::size_t>> candidates(num_gts);
  std::priority_queue<Claim> heap;
  for (std::size_t g = 0; g < num_gts; ++g) {
    if (result.gt_match_counts[g] > 0 || !(result.gt_best[g].score > thresholds.min_pos)) continue;
    const auto row = matrix.row(g);
    std::vector<std::size_t>& list = candidates[g];
    for (std::size_t a = 0; a < num_anchors; ++a) {
      if (row[a] > thresholds.min_pos && !result.anchor_labels[a].is_positive()) list.push_back(a);
    }
    std::stable_sort(list.begin(), list.end(),
                     [&row](std::size_t x, std::size_t y) { return row[x] > row[y]; });
    if (!list.empty()) heap.push({row[list.front()], g, 0});
  }
  while (!heap.empty()) {
    Claim c = heap.top();
    heap.pop();
    const std::vector<std::size_t>& list = candidates[c.gt];
    const std::size_t anchor = list[c.cursor];
    if (!result.anchor_labels[anchor].is_positive()) {
      result.anchor_labels[anchor] = AnchorLabel::positive(c.gt);
      result.gt_match_counts[c.gt] = 1;
      result.gt_fallback[c.gt] = 1;
      continue;
    }
    if (++c.cursor < list.size()) {
      c.score = matrix(c.gt, list[c.cursor]);
      heap.push(c);
    }
  }
  return result;
}

std::optional<double> BucketStats::mean_positives() const {
  if (gt_count == 0) return std::nullopt;
  return static_cast<double>(positives) / static_cast<double>(gt_count);
}

std::optional<double> BucketStats::unmatched_fraction() const {
  if (gt_count == 0) return std::nullopt;
  return static_cast<double>(unmatched) / static_cast<double>(gt_count);
}

std::optional<double> BucketStats::threshold_unmatched_fraction() const {
  if (gt_count == 0) return std::nullopt;
  return static_cast<double>(threshold_unmatched) / static_cast<double>(gt_count);
}

std::optional<double> BucketStats::mean_best_score() const {
  if (gt_count == 0) return std::nullopt;
  return best_score_sum / static_cast<double>(gt_count);
}

void BucketStats::merge(const BucketStats& other) noexcept {
  gt_count += other.gt_count;
  positives += other.positives;
  unmatched += other.unmatched;
  threshold_unmatched += other.threshold_unmatched;
  best_score_sum += other.best_score_sum;
}

BucketStats MatchStats::total() const noexcept {
  BucketStats t;
  for (const BucketStats& b : buckets_) t.merge(b);
  return t;
}

void MatchStats::merge(const MatchStats& other) noexcept {
  for (std::size_t i = 0; i < buckets_.size(); ++i) buckets_[i].merge(other.buckets_[i]);
}

MatchStats match_stats(const AssignmentResult& result, std::span<const CBox> gts) {
  if (gts.size() != result.gt_match_counts.size()) {
    throw Error(Errc::invalid_argument, "match_stats got " + std::to_string(gts.size()) +
                                            " gts for an assignment over " +
                                            std::to_string(result.gt_match_counts.size()));
  }
  MatchStats stats;
  for (std::size_t g = 0; g < gts.size(); ++g) {
    BucketStats& b = stats[size_bucket(gts[g])];
    ++b.gt_count;
    b.positives += result.gt_match_counts[g];
    b.unmatched += result.gt_match_counts[g] == 0 ? 1 : 0;
    b.threshold_unmatched += result.threshold_positives(g) == 0 ? 1 : 0;
    b.best_score_sum += result.gt_best[g].score;
  }
  return stats;
}

}  // namespace simdist
