#ifndef SLICEMINE_SLICE_HPP_
#define SLICEMINE_SLICE_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "slicemine/common.hpp"
#include "slicemine/dataset.hpp"
#include "slicemine/interval.hpp"

namespace slicemine {

/// Sorted, pairwise-disjoint closed intervals.
struct IntervalUnion {
  std::vector<Interval> intervals;
  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;
};

/// Sorted set of stored column values (category codes for text columns).
struct ValueSet {
  std::vector<double> values;
  friend bool operator==(const ValueSet&, const ValueSet&) = default;
};

using FeaturePredicate = std::variant<IntervalUnion, ValueSet>;

FeaturePredicate make_interval(double low, double high);
FeaturePredicate make_values(std::vector<double> values);

bool matches(const FeaturePredicate& predicate, double value);

/// Records whose (non-missing) value satisfies the predicate.
Mask member_mask(const FeaturePredicate& predicate, const Eigen::ArrayXd& column);

enum class Heuristic { Categorical, Hpd, DecisionTree };

std::string_view heuristic_name(Heuristic h);
Heuristic parse_heuristic(std::string_view name);

/// One conjunct of a slice: a predicate on a feature column (by index).
struct SliceTerm {
  Index feature = 0;
  FeaturePredicate predicate;
  friend bool operator==(const SliceTerm&, const SliceTerm&) = default;
};

/// Conjunction of 1..3 single-feature predicates, sorted by feature index.
struct Slice {
  std::vector<SliceTerm> terms;
  Heuristic heuristic = Heuristic::Categorical;

  int order() const { return static_cast<int>(terms.size()); }
  bool uses(Index feature) const;
  /// Same predicates (heuristic tag ignored).
  bool same_predicates(const Slice& other) const { return terms == other.terms; }

  /// Conjunction of this slice with one more term on a feature not used yet.
  Slice with_term(SliceTerm term, Heuristic tag) const;
};

Mask membership(const Dataset& dataset, const Slice& slice);

struct SliceStats {
  Index n = 0;
  Index k = 0;
  double performance = 0.0;
  double p_value = 1.0;

  bool empty() const { return n == 0; }
};

struct Filters {
  Index min_support = 2;
  double perf_threshold = 0.0;
  double p_value_max = 0.05;

  void validate() const;
  bool passes_support_and_performance(const SliceStats& s) const {
    return !s.empty() && s.n >= min_support && s.performance <= perf_threshold;
  }
  bool passes(const SliceStats& s) const { return passes_support_and_performance(s) && s.p_value < p_value_max; }
};

struct EvaluatedSlice {
  Slice slice;
  SliceStats stats;
};

}  // namespace slicemine

#endif  // SLICEMINE_SLICE_HPP_
