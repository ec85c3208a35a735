#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "simdist/box.hpp"

namespace simdist {

/// Dense row-major grid of pairwise scores, rows = ground truths, cols = anchors.
/// Every stored value lies in [0, 1].
class MetricMatrix {
 public:
  MetricMatrix() = default;
  /// Throws Errc::invalid_argument on a size mismatch or an out-of-range value.
  MetricMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return values_.empty(); }

  double operator()(std::size_t row, std::size_t col) const noexcept {
    return values_[row * cols_ + col];
  }
  std::span<const double> row(std::size_t r) const noexcept {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct SimdComponents {
  double location = 0.0;
  double shape = 0.0;
};

namespace detail {

struct SimdFactors {
  double x;
  double y;
};

inline SimdFactors simd_factors(const NormParams& params, NormMode mode) noexcept {
  const bool use_m = mode == NormMode::both || mode == NormMode::width_only;
  const bool use_n = mode == NormMode::both || mode == NormMode::height_only;
  return {use_m ? params.m : 1.0, use_n ? params.n : 1.0};
}

// Shared by the scalar and batch paths so that both evaluate the exact same
// expression per pair.
inline SimdComponents simd_terms(const CBox& gt, const CBox& anchor, SimdFactors f) noexcept {
  const double wsum = (gt.w() + anchor.w()) / f.x;
  const double hsum = (gt.h() + anchor.h()) / f.y;
  const double lx = (gt.cx() - anchor.cx()) / wsum;
  const double ly = (gt.cy() - anchor.cy()) / hsum;
  const double sx = (gt.w() - anchor.w()) / wsum;
  const double sy = (gt.h() - anchor.h()) / hsum;
  return {std::sqrt(lx * lx + ly * ly), std::sqrt(sx * sx + sy * sy)};
}

/// exp underflows to 0 once the terms pass ~745, but SimD is strictly
/// positive, so finite terms are floored at the smallest normal double.
/// Infinite terms still give 0 and NaN stays NaN; callers treat both as errors.
inline constexpr double kSimdFloor = std::numeric_limits<double>::min();

inline double simd_value(const CBox& gt, const CBox& anchor, SimdFactors f) noexcept {
  const SimdComponents c = simd_terms(gt, anchor, f);
  const double x = c.location + c.shape;
  const double v = std::exp(-x);
  return v < kSimdFloor && x < std::numeric_limits<double>::infinity() ? kSimdFloor : v;
}

}  // namespace detail

/// Location and shape terms of SimD. Throws Errc::non_finite on overflow.
SimdComponents simd_components(const CBox& gt, const CBox& anchor, const NormParams& params,
                               NormMode mode = NormMode::both);

/// exp(-(location + shape)); equals 1 exactly when the boxes coincide.
double simd_pair(const CBox& gt, const CBox& anchor, const NormParams& params,
                 NormMode mode = NormMode::both);

/// Batch form of simd_pair. Element (i, j) is bit-identical to
/// simd_pair(gts[i], anchors[j], params, mode).
MetricMatrix simd_matrix(std::span<const CBox> gts, std::span<const CBox> anchors,
                         const NormParams& params, NormMode mode = NormMode::both);

double iou(const CBox& a, const CBox& b) noexcept;

/// exp(-D / scale), D the Euclidean center distance.
double dotd(const CBox& gt, const CBox& anchor, double scale);

/// exp(-W / constant) with W the closed-form 2-Wasserstein distance between
/// the boxes' Gaussian models.
double nwd(const CBox& gt, const CBox& anchor, double constant);

/// Raw receptive-field divergence term; may be negative for beta != 1.
double rfd_divergence(const CBox& gt, const CBox& anchor, double beta);

/// 1 / (1 + max(divergence, 0)).
double rfd(const CBox& gt, const CBox& anchor, double beta);

enum class MetricKind { iou, dotd, nwd, rfd, simd };

const char* to_string(MetricKind kind) noexcept;
MetricKind parse_metric_kind(const std::string& name);

/// A metric selector together with the parameters it needs.
struct Metric {
  MetricKind kind = MetricKind::iou;
  double dotd_scale = 0.0;
  double nwd_constant = 12.8;
  double rfd_beta = 1.0;
  NormParams norm;
  NormMode norm_mode = NormMode::both;

  /// Throws Errc::invalid_argument if the parameters for `kind` are unusable.
  void validate() const;

  double operator()(const CBox& gt, const CBox& anchor) const;
};

/// Pairwise score matrix for any metric. Throws Errc::empty_input on empty lists.
MetricMatrix pairwise(const Metric& metric, std::span<const CBox> gts,
                      std::span<const CBox> anchors);

}  // namespace simdist
