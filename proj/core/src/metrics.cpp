#include "simdist/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "simdist/error.hpp"
#include "simdist/io.hpp"

namespace simdist {

MetricMatrix::MetricMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw Error(Errc::invalid_argument, "metric matrix holds " + std::to_string(values_.size()) +
                                            " values, expected " + std::to_string(rows_) + "x" +
                                            std::to_string(cols_));
  }
  for (const double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(Errc::invalid_argument, "metric matrix value outside [0, 1]: " + format_double(v));
    }
  }
}

SimdComponents simd_components(const CBox& gt, const CBox& anchor, const NormParams& params,
                               NormMode mode) {
  params.validate();
  const SimdComponents c = detail::simd_terms(gt, anchor, detail::simd_factors(params, mode));
  if (!std::isfinite(c.location) || !std::isfinite(c.shape)) {
    throw Error(Errc::non_finite, "SimD terms overflowed for " + to_string(gt) + " vs " +
                                      to_string(anchor));
  }
  return c;
}

double simd_pair(const CBox& gt, const CBox& anchor, const NormParams& params, NormMode mode) {
  simd_components(gt, anchor, params, mode);
  return detail::simd_value(gt, anchor, detail::simd_factors(params, mode));
}

MetricMatrix simd_matrix(std::span<const CBox> gts, std::span<const CBox> anchors,
                         const NormParams& params, NormMode mode) {
  if (gts.empty() || anchors.empty()) {
    throw Error(Errc::empty_input, "simd_matrix needs at least one gt and one anchor");
  }
  params.validate();
  const detail::SimdFactors f = detail::simd_factors(params, mode);
  std::vector<double> values(gts.size() * anchors.size());
  double* out = values.data();
  for (const CBox& g : gts) {
    for (const CBox& a : anchors) {
      *out++ = detail::simd_value(g, a, f);
    }
  }
  // Finite terms never produce 0 (see kSimdFloor), so 0 or nan means overflow.
  if (std::any_of(values.begin(), values.end(), [](double v) { return !(v > 0.0); })) {
    throw Error(Errc::non_finite, "SimD matrix contains a non-finite value");
  }
  return MetricMatrix(gts.size(), anchors.size(), std::move(values));
}

double iou(const CBox& a, const CBox& b) noexcept {
  const double ax1 = a.x1(), ay1 = a.y1(), ax2 = a.x2(), ay2 = a.y2();
  const double bx1 = b.x1(), by1 = b.y1(), bx2 = b.x2(), by2 = b.y2();
  const double iw = std::min(ax2, bx2) - std::max(ax1, bx1);
  const double ih = std::min(ay2, by2) - std::max(ay1, by1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double area_a = (ax2 - ax1) * (ay2 - ay1);
  const double area_b = (bx2 - bx1) * (by2 - by1);
  return std::clamp(inter / (area_a + area_b - inter), 0.0, 1.0);
}

double dotd(const CBox& gt, const CBox& anchor, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(Errc::invalid_argument, "DotD scale must be positive, got " + format_double(scale));
  }
  const double dx = gt.cx() - anchor.cx();
  const double dy = gt.cy() - anchor.cy();
  return std::exp(-std::sqrt(dx * dx + dy * dy) / scale);
}

double nwd(const CBox& gt, const CBox& anchor, double constant) {
  if (!(constant > 0.0) || !std::isfinite(constant)) {
    throw Error(Errc::invalid_argument, "NWD constant must be positive, got " + format_double(constant));
  }
  const double dx = gt.cx() - anchor.cx();
  const double dy = gt.cy() - anchor.cy();
  const double dw = gt.w() - anchor.w();
  const double dh = gt.h() - anchor.h();
  const double w2 = std::sqrt(dx * dx + dy * dy + (dw * dw + dh * dh) * 0.25);
  return std::exp(-w2 / constant);
}

double rfd_divergence(const CBox& gt, const CBox& anchor, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(Errc::invalid_argument, "RFD beta must be positive, got " + format_double(beta));
  }
  const double wg2 = gt.w() * gt.w();
  const double hg2 = gt.h() * gt.h();
  const double dx = anchor.cx() - gt.cx();
  const double dy = anchor.cy() - gt.cy();
  return 0.5 * beta * (anchor.w() * anchor.w()) / wg2 + 0.5 * beta * (anchor.h() * anchor.h()) / hg2 +
         2.0 * (dx * dx) / wg2 + 2.0 * (dy * dy) / hg2 + std::log(gt.w() / (beta * anchor.w())) +
         std::log(gt.h() / (beta * anchor.h())) - 1.0;
}

double rfd(const CBox& gt, const CBox& anchor, double beta) {
  const double c = rfd_divergence(gt, anchor, beta);
  if (!std::isfinite(c)) {
    throw Error(Errc::non_finite, "RFD divergence is not finite");
  }
  return 1.0 / (1.0 + std::max(c, 0.0));
}

const char* to_string(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::iou: return "iou";
    case MetricKind::dotd: return "dotd";
    case MetricKind::nwd: return "nwd";
    case MetricKind::rfd: return "rfd";
    case MetricKind::simd: return "simd";
  }
  return "iou";
}

MetricKind parse_metric_kind(const std::string& name) {
  if (name == "iou") return MetricKind::iou;
  if (name == "dotd") return MetricKind::dotd;
  if (name == "nwd") return MetricKind::nwd;
  if (name == "rfd") return MetricKind::rfd;
  if (name == "simd") return MetricKind::simd;
  throw Error(Errc::config, "unknown metric '" + name + "' (expected iou, dotd, nwd, rfd, simd)");
}

void Metric::validate() const {
  switch (kind) {
    case MetricKind::iou:
      return;
    case MetricKind::dotd:
      if (!(dotd_scale > 0.0) || !std::isfinite(dotd_scale)) {
        throw Error(Errc::invalid_argument, "DotD needs a positive scale S");
      }
      return;
    case MetricKind::nwd:
      if (!(nwd_constant > 0.0) || !std::isfinite(nwd_constant)) {
        throw Error(Errc::invalid_argument, "NWD needs a positive constant C");
      }
      return;
    case MetricKind::rfd:
      if (!(rfd_beta > 0.0) || !std::isfinite(rfd_beta)) {
        throw Error(Errc::invalid_argument, "RFD needs a positive beta");
      }
      return;
    case MetricKind::simd:
      norm.validate();
      return;
  }
}

double Metric::operator()(const CBox& gt, const CBox& anchor) const {
  switch (kind) {
    case MetricKind::iou: return iou(gt, anchor);
    case MetricKind::dotd: return dotd(gt, anchor, dotd_scale);
    case MetricKind::nwd: return nwd(gt, anchor, nwd_constant);
    case MetricKind::rfd: return rfd(gt, anchor, rfd_beta);
    case MetricKind::simd: return simd_pair(gt, anchor, norm, norm_mode);
  }
  return 0.0;
}

MetricMatrix pairwise(const Metric& metric, std::span<const CBox> gts, std::span<const CBox> anchors) {
  if (gts.empty() || anchors.empty()) {
    throw Error(Errc::empty_input, "pairwise metric needs at least one gt and one anchor");
  }
  metric.validate();
  if (metric.kind == MetricKind::simd) {
    return simd_matrix(gts, anchors, metric.norm, metric.norm_mode);
  }
  std::vector<double> values;
  values.reserve(gts.size() * anchors.size());
  for (const CBox& g : gts) {
    switch (metric.kind) {
      case MetricKind::iou:
        for (const CBox& a : anchors) values.push_back(iou(g, a));
        break;
      case MetricKind::dotd:
        for (const CBox& a : anchors) values.push_back(dotd(g, a, metric.dotd_scale));
        break;
      case MetricKind::nwd:
        for (const CBox& a : anchors) values.push_back(nwd(g, a, metric.nwd_constant));
        break;
      case MetricKind::rfd:
        for (const CBox& a : anchors) values.push_back(rfd(g, a, metric.rfd_beta));
        break;
      case MetricKind::simd:
        break;
    }
  }
  return MetricMatrix(gts.size(), anchors.size(), std::move(values));
}

}  // namespace simdist
