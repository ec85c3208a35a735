#include "simdist/box.hpp"

#include <cmath>

#include "simdist/error.hpp"
#include "simdist/io.hpp"

namespace simdist {

CBox::CBox(double cx, double cy, double w, double h) : cx_(cx), cy_(cy), w_(w), h_(h) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) || !std::isfinite(h)) {
    throw Error(Errc::invalid_argument, "box has a non-finite field");
  }
  if (w <= 0.0 || h <= 0.0) {
    throw Error(Errc::invalid_argument, "box must have positive width and height, got " +
                                            format_double(w) + "x" + format_double(h));
  }
}

std::string to_string(const CBox& box) {
  return "CBox(" + format_double(box.cx()) + ", " + format_double(box.cy()) + ", " +
         format_double(box.w()) + ", " + format_double(box.h()) + ")";
}

void NormParams::validate() const {
  if (!std::isfinite(m) || !std::isfinite(n) || m < kEpsNorm || n < kEpsNorm) {
    throw Error(Errc::invalid_argument, "normalization parameters must be finite and >= 1e-4, got m=" +
                                            format_double(m) + " n=" + format_double(n));
  }
}

NormParams NormParams::manual(double m, double n) {
  NormParams p{m, n, 0, "manual"};
  p.validate();
  return p;
}

const char* to_string(NormMode mode) noexcept {
  switch (mode) {
    case NormMode::both: return "both";
    case NormMode::width_only: return "width";
    case NormMode::height_only: return "height";
    case NormMode::none: return "none";
  }
  return "both";
}

NormMode parse_norm_mode(const std::string& name) {
  if (name == "both") return NormMode::both;
  if (name == "width") return NormMode::width_only;
  if (name == "height") return NormMode::height_only;
  if (name == "none") return NormMode::none;
  throw Error(Errc::config, "unknown norm mode '" + name + "' (expected both, width, height, none)");
}

}  // namespace simdist
