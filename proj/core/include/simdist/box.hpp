#pragma once

#include <cstdint>
#include <string>

namespace simdist {

/// Center-form axis-aligned box in pixels.
///
/// Construction rejects non-finite fields and non-positive extents; repair of
/// degenerate annotations belongs to ingestion, not here.
class CBox {
 public:
  CBox(double cx, double cy, double w, double h);

  double cx() const noexcept { return cx_; }
  double cy() const noexcept { return cy_; }
  double w() const noexcept { return w_; }
  double h() const noexcept { return h_; }

  double x1() const noexcept { return cx_ - 0.5 * w_; }
  double y1() const noexcept { return cy_ - 0.5 * h_; }
  double x2() const noexcept { return cx_ + 0.5 * w_; }
  double y2() const noexcept { return cy_ + 0.5 * h_; }

  CBox translated(double dx, double dy) const { return {cx_ + dx, cy_ + dy, w_, h_}; }
  CBox scaled(double s) const { return {cx_ * s, cy_ * s, w_ * s, h_ * s}; }

  friend bool operator==(const CBox&, const CBox&) = default;

 private:
  double cx_;
  double cy_;
  double w_;
  double h_;
};

std::string to_string(const CBox& box);

struct ImageSize {
  double width = 0.0;
  double height = 0.0;

  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

/// Lower bound applied to calibrated normalization parameters.
inline constexpr double kEpsNorm = 1e-4;

/// Normalization parameters (m, n) for the SimD location and shape terms.
struct NormParams {
  double m = 1.0;
  double n = 1.0;
  std::uint64_t pair_count = 0;
  std::string source_tag = "manual";

  /// Throws Errc::invalid_argument unless m, n are finite and >= kEpsNorm.
  void validate() const;

  static NormParams manual(double m, double n);

  friend bool operator==(const NormParams&, const NormParams&) = default;
};

/// Which SimD dimensions use the calibrated parameter. A disabled dimension
/// uses 1 in place of its parameter but keeps the (w_g + w_a) denominator.
enum class NormMode { both, width_only, height_only, none };

const char* to_string(NormMode mode) noexcept;
NormMode parse_norm_mode(const std::string& name);

}  // namespace simdist
