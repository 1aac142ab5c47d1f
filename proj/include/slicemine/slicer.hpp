#ifndef SLICEMINE_SLICER_HPP_
#define SLICEMINE_SLICER_HPP_

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "slicemine/dataset.hpp"
#include "slicemine/hpd.hpp"
#include "slicemine/slice.hpp"
#include "slicemine/stats.hpp"

namespace slicemine {

struct SlicerConfig {
  bool use_categorical = true;
  bool use_hpd = true;
  bool use_dt = true;
  int max_order = 2;
  double p_value_max = 0.05;
  double gap = 0.04;
  double support_fraction = 0.05;
  Index support_floor = 2;
  hpd::HpdConfig hpd;
  int max_depth = 5;
  double ci_level = 0.95;
  unsigned workers = 1;

  void validate() const;
};

/// max(floor, ceil(fraction * (N - K))).
Index min_support(const DatasetSummary& summary, double fraction, Index floor);

/// ci_low - gap, clamped to [0, 1].
double perf_threshold(const DatasetSummary& summary, double gap);

Filters make_filters(const DatasetSummary& summary, const SlicerConfig& config);

/// Evaluates slices against one dataset; significance always uses the
/// dataset-level N and K.
class SliceEvaluator {
 public:
  explicit SliceEvaluator(const Dataset& dataset);

  SliceStats operator()(const Slice& slice) const;
  SliceStats stats_for(const Mask& members) const;

 private:
  const Dataset& dataset_;
  stats::LowerTailTest test_;
};

SliceStats evaluate_slice(const Dataset& dataset, const Slice& slice);

/// Single-feature proposals for one feature, computed over the records in
/// `restriction` (all records when empty): one slice per category value for
/// categorical features, HPD ranges for continuous ones.
std::vector<Slice> single_feature_slices(const Dataset& dataset, Index feature, const Mask& restriction,
                                         const SlicerConfig& config);

/// Order-1 proposals: categorical values, HPD ranges and single-feature trees.
std::vector<Slice> generate_one_way(const Dataset& dataset, const SlicerConfig& config, const Filters& filters);

/// Order-2/3 proposals by conditioning on reported lower-order slices and by
/// trees over feature pairs and triples.
std::vector<Slice> generate_higher_order(const Dataset& dataset, const std::vector<EvaluatedSlice>& reported_one_way,
                                         const SlicerConfig& config, const Filters& filters);

/// Keeps slices passing all three filters, drops repeated predicates (first
/// wins) and sorts by p-value, then larger support, then feature names.
std::vector<EvaluatedSlice> filter_and_rank(const std::vector<EvaluatedSlice>& candidates, const Filters& filters,
                                            const Dataset& dataset);

struct GroupCount {
  Index candidates = 0;
  Index reported = 0;
};

using GroupKey = std::pair<Heuristic, int>;

struct SliceRun {
  DatasetSummary summary;
  Filters filters;
  std::map<GroupKey, GroupCount> counts;
  std::vector<EvaluatedSlice> candidates;  // pass support and performance
  std::vector<EvaluatedSlice> reported;
};

SliceRun run_slicer(const Dataset& dataset, const SlicerConfig& config);

}  // namespace slicemine

#endif  // SLICEMINE_SLICER_HPP_
