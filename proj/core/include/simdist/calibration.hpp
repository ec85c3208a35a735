#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "simdist/anchors.hpp"
#include "simdist/box.hpp"
#include "simdist/dataset.hpp"

namespace simdist {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const noexcept { return sum_ + comp_; }

  friend bool operator==(const CompensatedSum&, const CompensatedSum&) = default;

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Running sums of |dx|/(w_g + w_a) and |dy|/(h_g + h_a) over GT x anchor pairs.
struct CalibrationAccumulator {
  CompensatedSum x_ratio;
  CompensatedSum y_ratio;
  std::uint64_t pair_count = 0;

  double sum_x_ratio() const noexcept { return x_ratio.value(); }
  double sum_y_ratio() const noexcept { return y_ratio.value(); }

  void merge(const CalibrationAccumulator& partial) noexcept {
    x_ratio.merge(partial.x_ratio);
    y_ratio.merge(partial.y_ratio);
    pair_count += partial.pair_count;
  }

  friend bool operator==(const CalibrationAccumulator&, const CalibrationAccumulator&) = default;
};

/// Adds every gt x anchor pair in gt-major order.
CalibrationAccumulator accumulate_image(std::span<const CBox> gts, std::span<const CBox> anchors,
                                        CalibrationAccumulator acc);

/// Averages the sums; m and n are floored at kEpsNorm. Errc::empty_input when
/// no pairs were seen.
NormParams finalize(const CalibrationAccumulator& acc);

struct CalibrationOptions {
  std::vector<std::size_t> levels;  // empty = every pyramid level
  double subsample_rate = 1.0;      // fraction of anchors kept per image; 1 = off
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

/// Dataset-level m, n. Per-image partials are merged in image-id order, so the
/// result does not depend on `threads`.
NormParams calibrate(const AnnotationSet& set, const AnchorSpec& spec,
                     const CalibrationOptions& options = {});

}  // namespace simdist
