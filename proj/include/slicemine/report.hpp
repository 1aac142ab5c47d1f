#ifndef SLICEMINE_REPORT_HPP_
#define SLICEMINE_REPORT_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slicemine/dataset.hpp"
#include "slicemine/slice.hpp"
#include "slicemine/slicer.hpp"

namespace slicemine::report {

inline constexpr int kSchemaVersion = 1;

enum class Format { Json, Markdown, Csv };
Format parse_format(std::string_view name);

/// Population statistics of slice supports (std is the population std).
struct SummaryStats {
  Index count = 0;
  std::optional<double> min;
  std::optional<double> avg;
  std::optional<double> max;
  std::optional<double> std;
};

SummaryStats summarize_supports(std::span<const Index> supports);

/// Structured, label-level form of one slice conjunct.
struct PredicateReport {
  std::string feature;
  bool is_interval = false;
  std::vector<std::pair<double, double>> intervals;
  std::vector<std::string> values;
  std::string text;
};

struct SliceReport {
  std::vector<PredicateReport> predicates;
  Index n = 0;
  Index k = 0;
  double performance = 0.0;
  double p_value = 1.0;
  std::string heuristic;
  int order = 0;
};

struct GroupReport {
  std::string heuristic;
  int order = 0;
  Index candidates = 0;
  Index reported = 0;
  SummaryStats supports;
};

/// Every knob the run actually used.
struct ReportSettings {
  std::string input;
  std::string ground_truth;
  std::string prediction;
  std::vector<std::string> heuristics;
  int max_order = 2;
  double p_value_max = 0.05;
  double gap = 0.04;
  double support_fraction = 0.05;
  Index support_floor = 2;
  Index min_support = 2;
  double perf_threshold = 0.0;
  double epsilon = 0.05;
  double initial_density = 0.90;
  double min_density_floor = 0.10;
  int max_depth = 5;
  double ci_level = 0.95;
  std::string ci_method = "wilson";
  bool all_numeric = false;
  Index categorical_threshold = 10;
};

struct RunReport {
  int schema_version = kSchemaVersion;
  Index N = 0;
  Index K = 0;
  double metric = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  ReportSettings settings;
  std::vector<GroupReport> groups;
  std::vector<SliceReport> slices;
};

/// Human-readable predicate: "lo - hi" ranges joined by " | ", or category
/// labels ("5", or "(2, 3, 4, 5)" for several values).
std::string render_predicate(const FeatureColumn& column, const FeaturePredicate& predicate);
/// Inverse of render_predicate for the given column.
FeaturePredicate parse_predicate(const FeatureColumn& column, std::string_view text);

PredicateReport describe(const FeatureColumn& column, const FeaturePredicate& predicate);
SliceReport describe(const Dataset& dataset, const EvaluatedSlice& slice);

RunReport make_report(const Dataset& dataset, const SliceRun& run, ReportSettings settings);

std::string render(const RunReport& report, Format format);
std::string render_json(const RunReport& report);
std::string render_markdown(const RunReport& report);
std::string render_csv(const RunReport& report);

RunReport parse_json(std::string_view text);

/// Scientific p-value text with two significant digits, e.g. "1.2E-25".
std::string format_pvalue(double p);
/// Three-decimal performance text, e.g. "0.699".
std::string format_performance(double v);

}  // namespace slicemine::report

#endif  // SLICEMINE_REPORT_HPP_
