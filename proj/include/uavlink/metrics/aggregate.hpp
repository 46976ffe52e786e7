#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "uavlink/core/error.hpp"

namespace uavlink::metrics {

struct Summary {
  double min = 0.0;
  double avg = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

// min / mean / max, the way the delay plots report them.
template <typename T>
Summary aggregate(std::span<const T> values) {
  if (values.empty()) throw MetricError("aggregate: empty sequence");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  long double sum = 0;
  for (const auto& v : values) sum += static_cast<long double>(v);
  Summary s;
  s.min = static_cast<double>(*lo);
  s.max = static_cast<double>(*hi);
  s.avg = static_cast<double>(sum / static_cast<long double>(values.size()));
  s.count = values.size();
  // Guards against rounding for constant input.
  s.avg = std::clamp(s.avg, s.min, s.max);
  return s;
}

template <typename T>
Summary aggregate(const std::vector<T>& values) {
  return aggregate(std::span<const T>(values));
}

}  // namespace uavlink::metrics
