#ifndef SLICEMINE_HPD_HPP_
#define SLICEMINE_HPD_HPP_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "slicemine/common.hpp"
#include "slicemine/interval.hpp"

namespace slicemine::hpd {

struct HpdConfig {
  double initial_density = 0.90;
  double epsilon = 0.05;
  double min_density_floor = 0.10;

  void validate() const;
};

/// Support and correct count of a candidate range.
struct Counts {
  Index n = 0;
  Index k = 0;
};

struct HpdCandidate {
  Interval interval;
  Index n = 0;
  Index k = 0;
};

/// Number of records a density covers: ceil(proportion * len), at least 1.
Index window_size(Index len, double proportion);

/// Shortest window [v[i], v[i+m-1]] with m = window_size(len, proportion);
/// ties go to the leftmost window.
Interval shortest_interval(std::span<const double> sorted_values, double proportion);

struct ShrinkResult {
  Interval inner;
  std::optional<Interval> left_strip;
  std::optional<Interval> right_strip;
};

/// One shrink of the highest-density interval: the shortest window holding
/// window_size(len, target_density) records is searched among the records
/// inside `current`; the strips are the discarded records on either side.
ShrinkResult shrink_step(std::span<const double> sorted_values, const Interval& current, double target_density);

/// Maps a range to the exact (n, k) it selects in the reference population.
using IntervalEvaluator = std::function<Counts(const Interval&)>;

/// Shrinking highest-density scan over one numeric feature.
///
/// Starting from the HPD at `initial_density` of the working sample, the
/// density is lowered by `epsilon` per step. When accuracy on the inner
/// interval drops, the inner interval is a candidate. When it rises, every
/// discarded strip that under-performs the previous interval is a candidate,
/// and consecutive such strips on the same side are also emitted merged.
/// Once the inner interval would hold fewer than `min_density_floor` of the
/// original records, its records are dropped from the working sample and the
/// scan restarts at `initial_density`; it ends when the working sample falls
/// below the same floor.
///
/// `values` uses NaN for missing. Every candidate's (n, k) comes from
/// `evaluate`, which defaults to membership counting over all non-missing
/// records of `values`.
std::vector<HpdCandidate> hpd_scan(const Eigen::ArrayXd& values, const Mask& correctness, const HpdConfig& config,
                                   const IntervalEvaluator& evaluate = {});

}  // namespace slicemine::hpd

#endif  // SLICEMINE_HPD_HPP_
