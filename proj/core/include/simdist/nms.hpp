#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "simdist/box.hpp"
#include "simdist/metrics.hpp"

namespace simdist {

struct Detection {
  CBox box;
  double score = 0.0;
  std::int64_t category_id = 0;
};

/// Greedy NMS under any pairwise metric. Priority is (score desc, index asc);
/// a candidate is removed when metric(kept, candidate) > threshold. Returns
/// kept indices in ascending order.
std::vector<std::size_t> greedy_suppress(std::span<const Detection> dets, const Metric& metric,
                                         double threshold, bool class_aware);

}  // namespace simdist
