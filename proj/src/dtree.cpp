#include "slicemine/dtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace slicemine::dtree {

namespace {

constexpr double kGainTolerance = 1e-12;

using Rows = std::vector<Index>;

Rows usable_rows(std::span<const Eigen::ArrayXd> columns, Index n) {
  Rows rows;
  for (Index i = 0; i < n; ++i) {
    if (std::none_of(columns.begin(), columns.end(), [&](const Eigen::ArrayXd& c) { return std::isnan(c[i]); })) {
      rows.push_back(i);
    }
  }
  return rows;
}

Index count_true(const Rows& rows, const Mask& target) {
  return std::count_if(rows.begin(), rows.end(), [&](Index i) { return target[i]; });
}

std::pair<Rows, Rows> partition(const Rows& rows, const Eigen::ArrayXd& column, double threshold) {
  Rows left, right;
  for (Index i : rows) (column[i] <= threshold ? left : right).push_back(i);
  return {std::move(left), std::move(right)};
}

std::unique_ptr<TreeNode> grow(std::span<const Eigen::ArrayXd> columns, const Mask& target, const Rows& rows,
                               int depth, const DtConfig& config) {
  auto node = std::make_unique<TreeNode>();
  node->depth = depth;
  node->n_true = count_true(rows, target);
  node->n_false = static_cast<Index>(rows.size()) - node->n_true;
  if (depth >= config.max_depth || node->n_true == 0 || node->n_false == 0) return node;

  Mask sub_target(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) sub_target[static_cast<Index>(r)] = target[rows[r]];

  std::optional<Split> chosen;
  double best_gain = -1.0;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    Eigen::ArrayXd sub(static_cast<Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) sub[static_cast<Index>(r)] = columns[c][rows[r]];
    const auto s = best_split(sub, sub_target, config.min_leaf);
    if (s && s->impurity_decrease > best_gain + kGainTolerance) {
      best_gain = s->impurity_decrease;
      chosen = Split{static_cast<Index>(c), s->threshold};
    }
  }
  if (!chosen) return node;

  node->split = chosen;
  const auto [left, right] = partition(rows, columns[static_cast<std::size_t>(chosen->feature)], chosen->threshold);
  node->left = grow(columns, target, left, depth + 1, config);
  node->right = grow(columns, target, right, depth + 1, config);
  return node;
}

struct Extraction {
  const Dataset& dataset;
  std::span<const Index> features;
  const Filters& filters;
  std::vector<std::pair<Slice, int>> found;

  Slice slice_for(const Rows& rows, const std::vector<bool>& used) const {
    Slice s;
    s.heuristic = Heuristic::DecisionTree;
    for (std::size_t j = 0; j < features.size(); ++j) {
      if (!used[j]) continue;
      const auto& col = dataset.feature(features[j]);
      std::vector<double> vals;
      vals.reserve(rows.size());
      for (Index i : rows) vals.push_back(col.values[i]);
      const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
      SliceTerm term{features[j], col.kind() == FeatureKind::Categorical ? make_values(vals) : make_interval(*lo, *hi)};
      s = s.with_term(std::move(term), Heuristic::DecisionTree);
    }
    return s;
  }

  void visit(const TreeNode& node, const Rows& rows, std::vector<bool> used, bool root) {
    if (!root && !rows.empty()) {
      const double acc = static_cast<double>(node.n_true) / static_cast<double>(node.size());
      if (node.size() >= filters.min_support && acc <= filters.perf_threshold) {
        Slice s = slice_for(rows, used);
        auto same = std::find_if(found.begin(), found.end(), [&](const auto& f) { return f.first.same_predicates(s); });
        if (same == found.end()) {
          found.emplace_back(std::move(s), node.depth);
        } else if (node.depth > same->second) {
          *same = {std::move(s), node.depth};
        }
      }
    }
    if (node.is_leaf()) return;
    const auto f = static_cast<std::size_t>(node.split->feature);
    used[f] = true;
    const auto& column = dataset.feature(features[f]).values;
    const auto [left, right] = partition(rows, column, node.split->threshold);
    visit(*node.left, left, used, false);
    visit(*node.right, right, used, false);
  }
};

}  // namespace

void DtConfig::validate() const {
  if (max_depth < 1) throw std::invalid_argument("tree depth must be positive");
  if (min_leaf < 1) throw std::invalid_argument("minimal leaf size must be positive");
  if (max_order < 1 || max_order > 3) throw std::invalid_argument("tree feature order must lie in 1..3");
}

double gini(Index n_true, Index n_false) {
  const Index n = n_true + n_false;
  if (n_true < 0 || n_false < 0 || n < 1) throw std::invalid_argument("gini: empty node");
  const double pt = static_cast<double>(n_true) / static_cast<double>(n);
  const double pf = static_cast<double>(n_false) / static_cast<double>(n);
  return 1.0 - pt * pt - pf * pf;
}

std::optional<SplitChoice> best_split(const Eigen::ArrayXd& column, const Mask& target, Index min_leaf) {
  if (column.size() != target.size()) throw std::invalid_argument("best_split: misaligned arrays");
  std::vector<Index> order;
  for (Index i = 0; i < column.size(); ++i) {
    if (!std::isnan(column[i])) order.push_back(i);
  }
  const auto n = static_cast<Index>(order.size());
  if (n < 2) return std::nullopt;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return column[a] < column[b]; });
  const Index total_true = std::count_if(order.begin(), order.end(), [&](Index i) { return target[i]; });
  if (total_true == 0 || total_true == n) return std::nullopt;

  const double parent = gini(total_true, n - total_true);
  std::optional<SplitChoice> best;
  Index left_true = 0;
  for (Index pos = 0; pos + 1 < n; ++pos) {
    if (target[order[pos]]) ++left_true;
    const double v = column[order[pos]];
    const double next = column[order[pos + 1]];
    if (!(v < next)) continue;
    const Index nl = pos + 1;
    const Index nr = n - nl;
    if (nl < min_leaf || nr < min_leaf) continue;
    const Index right_true = total_true - left_true;
    const double weighted = (static_cast<double>(nl) * gini(left_true, nl - left_true) +
                             static_cast<double>(nr) * gini(right_true, nr - right_true)) /
                            static_cast<double>(n);
    const double decrease = parent - weighted;
    if (!best || decrease > best->impurity_decrease + kGainTolerance) {
      double threshold = v + (next - v) / 2.0;
      if (!(threshold < next)) threshold = v;
      best = SplitChoice{threshold, decrease};
    }
  }
  return best;
}

TreeNode fit_tree(std::span<const Eigen::ArrayXd> columns, const Mask& correctness, const DtConfig& config) {
  config.validate();
  if (columns.empty() || columns.size() > 3) throw std::invalid_argument("fit_tree takes 1 to 3 columns");
  for (const auto& c : columns) {
    if (c.size() != correctness.size()) throw std::invalid_argument("fit_tree: misaligned arrays");
  }
  const Rows rows = usable_rows(columns, correctness.size());
  if (static_cast<Index>(rows.size()) < config.min_leaf) {
    throw std::invalid_argument("fit_tree: fewer usable rows than the minimal leaf size");
  }
  return std::move(*grow(columns, correctness, rows, 0, config));
}

std::vector<Slice> extract_slices(const TreeNode& tree, const Dataset& dataset, std::span<const Index> features,
                                  const Filters& filters) {
  std::vector<Eigen::ArrayXd> columns;
  for (Index f : features) columns.push_back(dataset.feature(f).values);
  Extraction ex{dataset, features, filters, {}};
  ex.visit(tree, usable_rows(columns, dataset.n_records()), std::vector<bool>(features.size(), false), true);
  std::vector<Slice> out;
  out.reserve(ex.found.size());
  for (auto& [s, depth] : ex.found) out.push_back(std::move(s));
  return out;
}

std::vector<Slice> tree_slices(const Dataset& dataset, std::span<const Index> features, const DtConfig& config,
                               const Filters& filters) {
  std::vector<Eigen::ArrayXd> columns;
  for (Index f : features) columns.push_back(dataset.feature(f).values);
  if (static_cast<Index>(usable_rows(columns, dataset.n_records()).size()) < config.min_leaf) return {};
  const TreeNode tree = fit_tree(columns, dataset.correctness(), config);
  return extract_slices(tree, dataset, features, filters);
}

}  // namespace slicemine::dtree
