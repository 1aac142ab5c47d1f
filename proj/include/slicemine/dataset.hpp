#ifndef SLICEMINE_DATASET_HPP_
#define SLICEMINE_DATASET_HPP_

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "slicemine/common.hpp"

namespace slicemine {

enum class FeatureKind { Categorical, Continuous };
enum class ColumnRole { Feature, GroundTruth, Prediction };

struct ColumnSchema {
  std::string name;
  FeatureKind kind = FeatureKind::Continuous;
  Index distinct_count = 0;
  ColumnRole role = ColumnRole::Feature;
};

struct IngestConfig {
  std::string ground_truth;
  std::string prediction;
  char delimiter = ',';
  // Extra missing marker besides the empty field, e.g. "?" or "NA".
  std::string missing_token;
  Index categorical_threshold = 10;
  bool all_numeric = false;
  std::map<std::string, FeatureKind> overrides;
};

/// One feature column. Numeric columns hold their parsed values; text columns
/// hold dense codes 0..m-1 (labels sorted) and keep the original labels.
/// Missing entries are NaN in both cases.
struct FeatureColumn {
  ColumnSchema schema;
  Eigen::ArrayXd values;
  std::vector<std::string> labels;

  bool is_text() const { return !labels.empty(); }
  const std::string& name() const { return schema.name; }
  FeatureKind kind() const { return schema.kind; }
  Mask present() const { return values.isNaN() == false; }

  /// Display label for a stored value (original text, or shortest decimal).
  std::string label(double value) const;
  /// Inverse of label(); nullopt when the text names no value of this column.
  std::optional<double> value_of(std::string_view text) const;
};

/// Immutable columnar test table with ground truth, predictions and the
/// derived per-record correctness mask.
class Dataset {
 public:
  Dataset(std::vector<FeatureColumn> features, std::vector<std::string> ground_truth,
          std::vector<std::string> prediction, std::string ground_truth_name,
          std::string prediction_name, std::vector<std::string> header);

  Index n_records() const { return static_cast<Index>(ground_truth_.size()); }
  Index n_features() const { return static_cast<Index>(features_.size()); }

  std::span<const FeatureColumn> features() const { return features_; }
  const FeatureColumn& feature(Index i) const { return features_.at(static_cast<std::size_t>(i)); }
  std::optional<Index> find_feature(std::string_view name) const;

  const Mask& correctness() const { return correct_; }
  const std::vector<std::string>& ground_truth() const { return ground_truth_; }
  const std::vector<std::string>& prediction() const { return prediction_; }
  const std::string& ground_truth_name() const { return ground_truth_name_; }
  const std::string& prediction_name() const { return prediction_name_; }
  const std::vector<std::string>& header() const { return header_; }

  /// Full schema in header order, including the two target columns.
  std::vector<ColumnSchema> schema() const;

  /// Copy with feature kinds replaced by the given schema entries.
  Dataset with_kinds(const std::vector<ColumnSchema>& schema) const;

 private:
  std::vector<FeatureColumn> features_;
  std::vector<std::string> ground_truth_;
  std::vector<std::string> prediction_;
  std::string ground_truth_name_;
  std::string prediction_name_;
  std::vector<std::string> header_;
  Mask correct_;
};

struct DatasetSummary {
  Index N = 0;
  Index K = 0;
  double metric = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double ci_level = 0.95;
};

/// Reads a delimited table. `path` may be "-" for stdin. Feature kinds are
/// inferred with infer_feature_kinds before returning.
Dataset load_table(const std::string& path, const IngestConfig& config);
Dataset load_table(std::istream& in, const IngestConfig& config);

std::vector<ColumnSchema> infer_feature_kinds(const Dataset& dataset, const IngestConfig& config);

DatasetSummary summarize(const Dataset& dataset, double ci_level = 0.95);

/// Writes the table back in its original header order; load_table on the
/// output reproduces the same column values.
void write_table(const Dataset& dataset, std::ostream& out, char delimiter = ',');

/// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);
std::optional<double> parse_number(std::string_view text);

}  // namespace slicemine

#endif  // SLICEMINE_DATASET_HPP_
