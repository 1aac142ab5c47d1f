#include "slicemine/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include "slicemine/stats.hpp"

namespace slicemine {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// One record of RFC-4180-style delimited text. Quoted fields may contain the
// delimiter and doubled quotes; embedded newlines are not supported.
std::vector<std::string> split_record(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      out.emplace_back(trim(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.emplace_back(trim(field));
  return out;
}

std::string quote_field(const std::string& s, char delim) {
  if (s.find(delim) == std::string::npos && s.find('"') == std::string::npos &&
      s.find('\n') == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// Equality key for ground truth / prediction values: numbers compare by
// value ("1" == "1.0"), everything else by trimmed text.
std::string target_key(const std::string& s) {
  if (auto v = parse_number(s)) return "#" + format_number(*v);
  return "$" + s;
}

std::string join_rows(const std::vector<Index>& rows) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(rows.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) out += ", ";
    out += std::to_string(rows[i]);
  }
  if (rows.size() > shown) out += ", ... (" + std::to_string(rows.size()) + " rows)";
  return out;
}

Index count_distinct(const Eigen::ArrayXd& values) {
  std::set<double> seen;
  for (double v : values) {
    if (!std::isnan(v)) seen.insert(v);
  }
  return static_cast<Index>(seen.size());
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string FeatureColumn::label(double value) const {
  if (std::isnan(value)) return "";
  if (is_text()) {
    const auto code = static_cast<std::size_t>(value);
    if (value >= 0 && code < labels.size() && static_cast<double>(code) == value) return labels[code];
  }
  return format_number(value);
}

std::optional<double> FeatureColumn::value_of(std::string_view text) const {
  if (is_text()) {
    const auto it = std::lower_bound(labels.begin(), labels.end(), text);
    if (it != labels.end() && *it == text) return static_cast<double>(it - labels.begin());
    return std::nullopt;
  }
  return parse_number(text);
}

Dataset::Dataset(std::vector<FeatureColumn> features, std::vector<std::string> ground_truth,
                 std::vector<std::string> prediction, std::string ground_truth_name,
                 std::string prediction_name, std::vector<std::string> header)
    : features_(std::move(features)),
      ground_truth_(std::move(ground_truth)),
      prediction_(std::move(prediction)),
      ground_truth_name_(std::move(ground_truth_name)),
      prediction_name_(std::move(prediction_name)),
      header_(std::move(header)) {
  if (ground_truth_.size() != prediction_.size()) {
    throw DataError("ground truth and prediction columns differ in length");
  }
  const Index n = n_records();
  for (const auto& f : features_) {
    if (f.values.size() != n) throw DataError("column '" + f.name() + "' has the wrong length");
  }
  correct_.resize(n);
  for (Index i = 0; i < n; ++i) {
    correct_[i] = target_key(ground_truth_[i]) == target_key(prediction_[i]);
  }
}

std::optional<Index> Dataset::find_feature(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name() == name) return static_cast<Index>(i);
  }
  return std::nullopt;
}

std::vector<ColumnSchema> Dataset::schema() const {
  std::vector<ColumnSchema> out;
  for (const auto& name : header_) {
    if (name == ground_truth_name_) {
      std::set<std::string> distinct(ground_truth_.begin(), ground_truth_.end());
      out.push_back({name, FeatureKind::Categorical, static_cast<Index>(distinct.size()), ColumnRole::GroundTruth});
    } else if (name == prediction_name_) {
      std::set<std::string> distinct(prediction_.begin(), prediction_.end());
      out.push_back({name, FeatureKind::Categorical, static_cast<Index>(distinct.size()), ColumnRole::Prediction});
    } else if (auto idx = find_feature(name)) {
      out.push_back(feature(*idx).schema);
    }
  }
  return out;
}

Dataset Dataset::with_kinds(const std::vector<ColumnSchema>& schema) const {
  Dataset copy = *this;
  for (const auto& s : schema) {
    if (s.role != ColumnRole::Feature) continue;
    if (auto idx = copy.find_feature(s.name)) {
      copy.features_[static_cast<std::size_t>(*idx)].schema.kind = s.kind;
    }
  }
  return copy;
}

Dataset load_table(const std::string& path, const IngestConfig& config) {
  if (path == "-") return load_table(std::cin, config);
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file '" + path + "'");
  return load_table(in, config);
}

Dataset load_table(std::istream& in, const IngestConfig& config) {
  if (config.ground_truth.empty() || config.prediction.empty()) {
    throw ConfigError("ground-truth and prediction column names are required");
  }
  std::string line;
  if (!std::getline(in, line)) throw DataError("input is empty: header row missing");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const std::vector<std::string> header = split_record(line, config.delimiter);

  const auto column_of = [&](const std::string& name, const char* what) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError(std::string(what) + " column not found: '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t gt_col = column_of(config.ground_truth, "ground truth");
  const std::size_t pred_col = column_of(config.prediction, "prediction");
  if (gt_col == pred_col) throw ConfigError("ground truth and prediction name the same column");
  for (const auto& [name, kind] : config.overrides) {
    if (std::find(header.begin(), header.end(), name) == header.end()) {
      throw ConfigError("kind override names a nonexistent column: '" + name + "'");
    }
    if (name == config.ground_truth || name == config.prediction) {
      throw ConfigError("kind override names a target column: '" + name + "'");
    }
  }

  std::vector<std::vector<std::string>> cells(header.size());
  std::vector<Index> bad_rows;
  Index row_number = 1;
  const auto is_missing = [&](const std::string& s) {
    return s.empty() || (!config.missing_token.empty() && s == config.missing_token);
  };
  while (std::getline(in, line)) {
    ++row_number;
    if (trim(line).empty()) continue;
    auto fields = split_record(line, config.delimiter);
    if (fields.size() != header.size()) {
      throw DataError("row " + std::to_string(row_number) + " has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(header.size()));
    }
    if (is_missing(fields[gt_col]) || is_missing(fields[pred_col])) {
      bad_rows.push_back(row_number);
      continue;
    }
    for (std::size_t c = 0; c < fields.size(); ++c) cells[c].push_back(std::move(fields[c]));
  }
  if (!bad_rows.empty()) {
    throw DataError("rows with missing ground truth or prediction: " + join_rows(bad_rows));
  }
  const std::size_t n = cells[gt_col].size();
  if (n == 0) throw DataError("input has no data rows");

  {
    std::set<std::string> gt_keys, pred_keys;
    for (const auto& s : cells[gt_col]) gt_keys.insert(target_key(s));
    for (const auto& s : cells[pred_col]) pred_keys.insert(target_key(s));
    const bool overlap = std::any_of(pred_keys.begin(), pred_keys.end(),
                                     [&](const std::string& k) { return gt_keys.count(k) > 0; });
    if (!overlap) {
      throw DataError("ground truth and prediction columns share no values; are the columns swapped or mislabeled?");
    }
  }

  std::vector<FeatureColumn> features;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == gt_col || c == pred_col) continue;
    FeatureColumn col;
    col.schema.name = header[c];
    col.schema.role = ColumnRole::Feature;
    col.values = Eigen::ArrayXd::Constant(static_cast<Index>(n), kMissing);
    bool numeric = true;
    for (const auto& s : cells[c]) {
      if (!is_missing(s) && !parse_number(s)) {
        numeric = false;
        break;
      }
    }
    if (numeric) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!is_missing(cells[c][i])) col.values[static_cast<Index>(i)] = *parse_number(cells[c][i]);
      }
    } else {
      std::set<std::string> distinct;
      for (const auto& s : cells[c]) {
        if (!is_missing(s)) distinct.insert(s);
      }
      col.labels.assign(distinct.begin(), distinct.end());
      std::unordered_map<std::string, double> code;
      for (std::size_t j = 0; j < col.labels.size(); ++j) code[col.labels[j]] = static_cast<double>(j);
      for (std::size_t i = 0; i < n; ++i) {
        if (!is_missing(cells[c][i])) col.values[static_cast<Index>(i)] = code.at(cells[c][i]);
      }
    }
    col.schema.distinct_count = count_distinct(col.values);
    features.push_back(std::move(col));
  }

  Dataset raw(std::move(features), std::move(cells[gt_col]), std::move(cells[pred_col]),
              config.ground_truth, config.prediction, header);
  return raw.with_kinds(infer_feature_kinds(raw, config));
}

std::vector<ColumnSchema> infer_feature_kinds(const Dataset& dataset, const IngestConfig& config) {
  for (const auto& [name, kind] : config.overrides) {
    if (!dataset.find_feature(name)) throw ConfigError("kind override names a nonexistent column: '" + name + "'");
  }
  std::vector<ColumnSchema> out;
  for (const auto& col : dataset.features()) {
    ColumnSchema s = col.schema;
    if (auto it = config.overrides.find(s.name); it != config.overrides.end()) {
      s.kind = it->second;
    } else if (col.is_text()) {
      s.kind = FeatureKind::Categorical;
    } else if (config.all_numeric) {
      s.kind = FeatureKind::Continuous;
    } else {
      s.kind = s.distinct_count <= config.categorical_threshold ? FeatureKind::Categorical
                                                                 : FeatureKind::Continuous;
    }
    out.push_back(std::move(s));
  }
  return out;
}

DatasetSummary summarize(const Dataset& dataset, double ci_level) {
  if (dataset.n_records() < 1) throw DataError("cannot summarize an empty dataset");
  DatasetSummary s;
  s.N = dataset.n_records();
  s.K = dataset.correctness().count();
  s.metric = static_cast<double>(s.K) / static_cast<double>(s.N);
  const auto ci = stats::wilson_interval(s.K, s.N, ci_level);
  s.ci_low = ci.low;
  s.ci_high = ci.high;
  s.ci_level = ci_level;
  return s;
}

void write_table(const Dataset& dataset, std::ostream& out, char delimiter) {
  const auto& header = dataset.header();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out << delimiter;
    out << quote_field(header[c], delimiter);
  }
  out << '\n';
  for (Index i = 0; i < dataset.n_records(); ++i) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c) out << delimiter;
      const auto& name = header[c];
      if (name == dataset.ground_truth_name()) {
        out << quote_field(dataset.ground_truth()[static_cast<std::size_t>(i)], delimiter);
      } else if (name == dataset.prediction_name()) {
        out << quote_field(dataset.prediction()[static_cast<std::size_t>(i)], delimiter);
      } else {
        const auto& col = dataset.feature(*dataset.find_feature(name));
        out << quote_field(col.label(col.values[i]), delimiter);
      }
    }
    out << '\n';
  }
}

}  // namespace slicemine
