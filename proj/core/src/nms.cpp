#include "simdist/nms.hpp"

#include <algorithm>
#include <numeric>

#include "simdist/error.hpp"
#include "simdist/io.hpp"

namespace simdist {

std::vector<std::size_t> greedy_suppress(std::span<const Detection> dets, const Metric& metric,
                                         double threshold, bool class_aware) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(Errc::invalid_argument,
                "NMS threshold must lie in [0, 1], got " + format_double(threshold));
  }
  if (dets.empty()) return {};
  metric.validate();

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });

  std::vector<std::uint8_t> removed(dets.size(), 0);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t k = order[i];
    if (removed[k]) continue;
    kept.push_back(k);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const std::size_t c = order[j];
      if (removed[c]) continue;
      if (class_aware && dets[c].category_id != dets[k].category_id) continue;
      if (metric(dets[k].box, dets[c].box) > threshold) removed[c] = 1;
    }
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace simdist
