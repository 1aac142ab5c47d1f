#ifndef SLICEMINE_DTREE_HPP_
#define SLICEMINE_DTREE_HPP_

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "slicemine/common.hpp"
#include "slicemine/dataset.hpp"
#include "slicemine/slice.hpp"

namespace slicemine::dtree {

struct DtConfig {
  int max_depth = 5;
  Index min_leaf = 2;
  int max_order = 2;

  void validate() const;
};

/// Records with value <= threshold go left.
struct Split {
  Index feature = 0;  // position within the fitted column list
  double threshold = 0.0;
};

struct TreeNode {
  std::optional<Split> split;
  std::unique_ptr<TreeNode> left;
  std::unique_ptr<TreeNode> right;
  Index n_true = 0;
  Index n_false = 0;
  int depth = 0;

  bool is_leaf() const { return !split.has_value(); }
  Index size() const { return n_true + n_false; }
};

double gini(Index n_true, Index n_false);

struct SplitChoice {
  double threshold = 0.0;
  double impurity_decrease = 0.0;
};

/// Best threshold (midpoint between consecutive distinct values) by weighted
/// Gini decrease with both children holding at least `min_leaf` records.
/// Pure targets have nothing to split. Ties go to the smallest threshold.
std::optional<SplitChoice> best_split(const Eigen::ArrayXd& column, const Mask& target, Index min_leaf);

/// Greedy CART over 1..3 columns (NaN = missing; such rows are skipped).
/// Ties between columns go to the earlier column.
TreeNode fit_tree(std::span<const Eigen::ArrayXd> columns, const Mask& correctness, const DtConfig& config);

/// Walks every non-root node and keeps those whose path defines an
/// under-performing slice. `features` maps fitted column positions to
/// dataset feature indices. Conditions on the same feature collapse into one
/// range over the node's actual values; categorical features become value
/// sets. Identical predicates are kept once.
std::vector<Slice> extract_slices(const TreeNode& tree, const Dataset& dataset, std::span<const Index> features,
                                  const Filters& filters);

/// Convenience: fit on the dataset's feature subset and extract.
std::vector<Slice> tree_slices(const Dataset& dataset, std::span<const Index> features, const DtConfig& config,
                               const Filters& filters);

}  // namespace slicemine::dtree

#endif  // SLICEMINE_DTREE_HPP_
