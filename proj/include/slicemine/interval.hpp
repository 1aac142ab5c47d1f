#ifndef SLICEMINE_INTERVAL_HPP_
#define SLICEMINE_INTERVAL_HPP_

#include <compare>

namespace slicemine {

/// Closed interval [low, high] over actual data values.
struct Interval {
  double low = 0.0;
  double high = 0.0;

  bool contains(double v) const { return low <= v && v <= high; }
  double width() const { return high - low; }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

}  // namespace slicemine

#endif  // SLICEMINE_INTERVAL_HPP_
