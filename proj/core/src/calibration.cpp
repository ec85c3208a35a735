#include "simdist/calibration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <thread>
#include <utility>

#include "simdist/error.hpp"
#include "simdist/io.hpp"

namespace simdist {

CalibrationAccumulator accumulate_image(std::span<const CBox> gts, std::span<const CBox> anchors,
                                        CalibrationAccumulator acc) {
  for (const CBox& g : gts) {
    for (const CBox& a : anchors) {
      acc.x_ratio.add(std::abs(g.cx() - a.cx()) / (g.w() + a.w()));
      acc.y_ratio.add(std::abs(g.cy() - a.cy()) / (g.h() + a.h()));
    }
  }
  acc.pair_count += static_cast<std::uint64_t>(gts.size()) * anchors.size();
  return acc;
}

NormParams finalize(const CalibrationAccumulator& acc) {
  if (acc.pair_count == 0) {
    throw Error(Errc::empty_input,
                "calibration found zero ground-truth/anchor pairs (empty dataset or anchor spec "
                "mismatch)");
  }
  const double count = static_cast<double>(acc.pair_count);
  NormParams p;
  p.m = std::max(acc.sum_x_ratio() / count, kEpsNorm);
  p.n = std::max(acc.sum_y_ratio() / count, kEpsNorm);
  p.pair_count = acc.pair_count;
  p.source_tag = "calibrated";
  return p;
}

namespace {

AnchorSpec select_levels(const AnchorSpec& spec, const std::vector<std::size_t>& levels) {
  if (levels.empty()) return spec;
  AnchorSpec out = spec;
  out.levels.clear();
  for (const std::size_t li : levels) {
    if (li >= spec.levels.size()) {
      throw Error(Errc::invalid_argument, "calibration level " + std::to_string(li) +
                                              " out of range (spec has " +
                                              std::to_string(spec.levels.size()) + ")");
    }
    out.levels.push_back(spec.levels[li]);
  }
  return out;
}

std::string describe(const CalibrationOptions& options) {
  std::string tag = "calibrated levels=";
  if (options.levels.empty()) {
    tag += "all";
  } else {
    for (std::size_t i = 0; i < options.levels.size(); ++i) {
      if (i > 0) tag += ",";
      tag += std::to_string(options.levels[i]);
    }
  }
  if (options.subsample_rate < 1.0) {
    tag += " subsample=" + format_double(options.subsample_rate) +
           " seed=" + std::to_string(options.seed);
  } else {
    tag += " subsample=off";
  }
  return tag;
}

std::vector<CBox> subsample(const std::vector<CBox>& anchors, double rate, std::uint64_t seed,
                            std::int64_t image_id) {
  const auto id = static_cast<std::uint64_t>(image_id);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<CBox> kept;
  kept.reserve(static_cast<std::size_t>(static_cast<double>(anchors.size()) * rate) + 1);
  for (const CBox& a : anchors) {
    if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < rate) kept.push_back(a);
  }
  return kept;
}

}  // namespace

NormParams calibrate(const AnnotationSet& set, const AnchorSpec& spec,
                     const CalibrationOptions& options) {
  if (!(options.subsample_rate > 0.0 && options.subsample_rate <= 1.0)) {
    throw Error(Errc::invalid_argument, "anchor subsample rate must lie in (0, 1]");
  }
  const AnchorSpec used = select_levels(spec, options.levels);
  used.validate();

  // Grids depend only on image size; build each distinct one once.
  std::map<std::pair<double, double>, AnchorGrid> grids;
  for (const ImageRecord& img : set.images) {
    const auto key = std::make_pair(img.width, img.height);
    if (!grids.contains(key)) grids.emplace(key, build_grid(used, {img.width, img.height}));
  }

  std::vector<CalibrationAccumulator> partials(set.images.size());
  const auto work = [&](std::size_t i) {
    const ImageRecord& img = set.images[i];
    if (img.gts.empty()) return;
    const std::vector<CBox> gts = img.boxes();
    const AnchorGrid& grid = grids.at({img.width, img.height});
    if (options.subsample_rate < 1.0) {
      const std::vector<CBox> anchors =
          subsample(grid.anchors, options.subsample_rate, options.seed, img.id);
      partials[i] = accumulate_image(gts, anchors, {});
    } else {
      partials[i] = accumulate_image(gts, grid.anchors, {});
    }
  };

  std::size_t threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                             : options.threads;
  threads = std::min(threads, std::max<std::size_t>(set.images.size(), 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < set.images.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < set.images.size(); i = next++) work(i);
      });
    }
  }

  // Merge order is fixed by image id, independent of scheduling and file order.
  std::vector<std::size_t> order(set.images.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return set.images[a].id < set.images[b].id;
  });
  CalibrationAccumulator total;
  for (const std::size_t i : order) total.merge(partials[i]);

  NormParams p = finalize(total);
  p.source_tag = describe(options);
  return p;
}

}  // namespace simdist
