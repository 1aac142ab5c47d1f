#include "slicemine/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace slicemine::report {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kRangeSep = " - ";
constexpr std::string_view kUnionSep = " | ";
constexpr std::string_view kListSep = ", ";

std::vector<std::string_view> split(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto at = s.find(sep, pos);
    if (at == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, at - pos));
    pos = at + sep.size();
  }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string markdown_cell(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string feature_list(const SliceReport& s, std::string_view sep) {
  std::vector<std::string> v;
  for (const auto& p : s.predicates) v.push_back(p.feature);
  return join(v, sep);
}

std::string predicate_list(const SliceReport& s, std::string_view sep) {
  std::vector<std::string> v;
  for (const auto& p : s.predicates) v.push_back(p.text);
  return join(v, sep);
}

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::optional<double> read_optional(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "json") return Format::Json;
  if (name == "markdown" || name == "md") return Format::Markdown;
  if (name == "csv") return Format::Csv;
  throw ConfigError("unsupported output format '" + std::string(name) + "' (expected json, markdown or csv)");
}

SummaryStats summarize_supports(std::span<const Index> supports) {
  SummaryStats s;
  s.count = static_cast<Index>(supports.size());
  if (supports.empty()) return s;
  const auto [lo, hi] = std::minmax_element(supports.begin(), supports.end());
  const double n = static_cast<double>(supports.size());
  const double mean = std::accumulate(supports.begin(), supports.end(), 0.0) / n;
  double ss = 0.0;
  for (Index v : supports) ss += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
  s.min = static_cast<double>(*lo);
  s.max = static_cast<double>(*hi);
  s.avg = mean;
  s.std = std::sqrt(ss / n);
  return s;
}

std::string render_predicate(const FeatureColumn& column, const FeaturePredicate& predicate) {
  if (const auto* u = std::get_if<IntervalUnion>(&predicate)) {
    std::vector<std::string> parts;
    for (const auto& iv : u->intervals) {
      parts.push_back(column.label(iv.low) + std::string(kRangeSep) + column.label(iv.high));
    }
    return join(parts, kUnionSep);
  }
  std::vector<std::string> labels;
  for (double v : std::get<ValueSet>(predicate).values) labels.push_back(column.label(v));
  if (labels.size() == 1) return labels.front();
  return "(" + join(labels, kListSep) + ")";
}

FeaturePredicate parse_predicate(const FeatureColumn& column, std::string_view text) {
  const auto value = [&](std::string_view t) {
    const auto v = column.value_of(t);
    if (!v) throw DataError("'" + std::string(t) + "' is not a value of column '" + column.name() + "'");
    return *v;
  };
  if (column.kind() == FeatureKind::Continuous) {
    IntervalUnion u;
    for (auto part : split(text, kUnionSep)) {
      const auto ends = split(part, kRangeSep);
      if (ends.size() != 2) throw DataError("malformed range '" + std::string(part) + "'");
      const double lo = value(ends[0]);
      const double hi = value(ends[1]);
      if (!(lo <= hi)) throw DataError("range with low > high: '" + std::string(part) + "'");
      u.intervals.push_back({lo, hi});
    }
    std::sort(u.intervals.begin(), u.intervals.end());
    return u;
  }
  if (column.value_of(text)) return make_values({value(text)});
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') {
    std::vector<double> values;
    for (auto part : split(text.substr(1, text.size() - 2), kListSep)) values.push_back(value(part));
    return make_values(std::move(values));
  }
  return make_values({value(text)});
}

PredicateReport describe(const FeatureColumn& column, const FeaturePredicate& predicate) {
  PredicateReport p;
  p.feature = column.name();
  p.text = render_predicate(column, predicate);
  if (const auto* u = std::get_if<IntervalUnion>(&predicate)) {
    p.is_interval = true;
    for (const auto& iv : u->intervals) p.intervals.emplace_back(iv.low, iv.high);
  } else {
    for (double v : std::get<ValueSet>(predicate).values) p.values.push_back(column.label(v));
  }
  return p;
}

SliceReport describe(const Dataset& dataset, const EvaluatedSlice& slice) {
  SliceReport r;
  for (const auto& t : slice.slice.terms) r.predicates.push_back(describe(dataset.feature(t.feature), t.predicate));
  r.n = slice.stats.n;
  r.k = slice.stats.k;
  r.performance = slice.stats.performance;
  r.p_value = slice.stats.p_value;
  r.heuristic = std::string(heuristic_name(slice.slice.heuristic));
  r.order = slice.slice.order();
  return r;
}

RunReport make_report(const Dataset& dataset, const SliceRun& run, ReportSettings settings) {
  RunReport r;
  r.N = run.summary.N;
  r.K = run.summary.K;
  r.metric = run.summary.metric;
  r.ci_low = run.summary.ci_low;
  r.ci_high = run.summary.ci_high;
  settings.min_support = run.filters.min_support;
  settings.perf_threshold = run.filters.perf_threshold;
  settings.p_value_max = run.filters.p_value_max;
  r.settings = std::move(settings);

  std::map<GroupKey, std::vector<Index>> supports;
  for (const auto& e : run.reported) supports[{e.slice.heuristic, e.slice.order()}].push_back(e.stats.n);
  for (const auto& [key, count] : run.counts) {
    GroupReport g;
    g.heuristic = std::string(heuristic_name(key.first));
    g.order = key.second;
    g.candidates = count.candidates;
    g.reported = count.reported;
    g.supports = summarize_supports(supports[key]);
    r.groups.push_back(std::move(g));
  }
  for (const auto& e : run.reported) r.slices.push_back(describe(dataset, e));
  return r;
}

std::string format_pvalue(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1E", p);
  return buf;
}

std::string format_performance(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string render(const RunReport& report, Format format) {
  switch (format) {
    case Format::Json:
      return render_json(report);
    case Format::Markdown:
      return render_markdown(report);
    case Format::Csv:
      return render_csv(report);
  }
  throw ConfigError("unsupported output format");
}

std::string render_json(const RunReport& report) {
  ordered_json doc;
  doc["schema_version"] = report.schema_version;
  doc["tool"] = "slicemine";

  const auto& s = report.settings;
  doc["dataset"] = {{"records", report.N}, {"correct", report.K},      {"metric", "accuracy"},
                    {"value", report.metric}, {"ci_low", report.ci_low}, {"ci_high", report.ci_high}};
  doc["settings"] = {{"input", s.input},
                     {"ground_truth", s.ground_truth},
                     {"prediction", s.prediction},
                     {"heuristics", s.heuristics},
                     {"max_order", s.max_order},
                     {"p_value_max", s.p_value_max},
                     {"gap", s.gap},
                     {"support_fraction", s.support_fraction},
                     {"support_floor", s.support_floor},
                     {"min_support", s.min_support},
                     {"perf_threshold", s.perf_threshold},
                     {"epsilon", s.epsilon},
                     {"initial_density", s.initial_density},
                     {"min_density_floor", s.min_density_floor},
                     {"max_depth", s.max_depth},
                     {"ci_level", s.ci_level},
                     {"ci_method", s.ci_method},
                     {"all_numeric", s.all_numeric},
                     {"categorical_threshold", s.categorical_threshold}};

  ordered_json groups = ordered_json::array();
  for (const auto& g : report.groups) {
    groups.push_back({{"heuristic", g.heuristic},
                      {"order", g.order},
                      {"candidates", g.candidates},
                      {"reported", g.reported},
                      {"support",
                       {{"count", g.supports.count},
                        {"min", optional_number(g.supports.min)},
                        {"avg", optional_number(g.supports.avg)},
                        {"max", optional_number(g.supports.max)},
                        {"std", optional_number(g.supports.std)}}}});
  }
  doc["groups"] = std::move(groups);

  ordered_json slices = ordered_json::array();
  for (const auto& sl : report.slices) {
    ordered_json preds = ordered_json::array();
    for (const auto& p : sl.predicates) {
      ordered_json jp;
      jp["feature"] = p.feature;
      jp["kind"] = p.is_interval ? "interval" : "values";
      if (p.is_interval) {
        ordered_json ivs = ordered_json::array();
        for (const auto& [lo, hi] : p.intervals) ivs.push_back({lo, hi});
        jp["intervals"] = std::move(ivs);
      } else {
        jp["values"] = p.values;
      }
      jp["text"] = p.text;
      preds.push_back(std::move(jp));
    }
    slices.push_back({{"predicates", std::move(preds)},
                      {"support", sl.n},
                      {"correct", sl.k},
                      {"performance", sl.performance},
                      {"p_value", sl.p_value},
                      {"heuristic", sl.heuristic},
                      {"order", sl.order}});
  }
  doc["slices"] = std::move(slices);
  return doc.dump(2) + "\n";
}

RunReport parse_json(std::string_view text) {
  const auto doc = ordered_json::parse(text.begin(), text.end());
  RunReport r;
  r.schema_version = doc.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion) {
    throw DataError("unsupported report schema version " + std::to_string(r.schema_version));
  }
  const auto& d = doc.at("dataset");
  r.N = d.at("records").get<Index>();
  r.K = d.at("correct").get<Index>();
  r.metric = d.at("value").get<double>();
  r.ci_low = d.at("ci_low").get<double>();
  r.ci_high = d.at("ci_high").get<double>();

  const auto& js = doc.at("settings");
  auto& s = r.settings;
  s.input = js.at("input").get<std::string>();
  s.ground_truth = js.at("ground_truth").get<std::string>();
  s.prediction = js.at("prediction").get<std::string>();
  s.heuristics = js.at("heuristics").get<std::vector<std::string>>();
  s.max_order = js.at("max_order").get<int>();
  s.p_value_max = js.at("p_value_max").get<double>();
  s.gap = js.at("gap").get<double>();
  s.support_fraction = js.at("support_fraction").get<double>();
  s.support_floor = js.at("support_floor").get<Index>();
  s.min_support = js.at("min_support").get<Index>();
  s.perf_threshold = js.at("perf_threshold").get<double>();
  s.epsilon = js.at("epsilon").get<double>();
  s.initial_density = js.at("initial_density").get<double>();
  s.min_density_floor = js.at("min_density_floor").get<double>();
  s.max_depth = js.at("max_depth").get<int>();
  s.ci_level = js.at("ci_level").get<double>();
  s.ci_method = js.at("ci_method").get<std::string>();
  s.all_numeric = js.at("all_numeric").get<bool>();
  s.categorical_threshold = js.at("categorical_threshold").get<Index>();

  for (const auto& jg : doc.at("groups")) {
    GroupReport g;
    g.heuristic = jg.at("heuristic").get<std::string>();
    g.order = jg.at("order").get<int>();
    g.candidates = jg.at("candidates").get<Index>();
    g.reported = jg.at("reported").get<Index>();
    const auto& sup = jg.at("support");
    g.supports.count = sup.at("count").get<Index>();
    g.supports.min = read_optional(sup.at("min"));
    g.supports.avg = read_optional(sup.at("avg"));
    g.supports.max = read_optional(sup.at("max"));
    g.supports.std = read_optional(sup.at("std"));
    r.groups.push_back(std::move(g));
  }
  for (const auto& jsl : doc.at("slices")) {
    SliceReport sl;
    for (const auto& jp : jsl.at("predicates")) {
      PredicateReport p;
      p.feature = jp.at("feature").get<std::string>();
      p.is_interval = jp.at("kind").get<std::string>() == "interval";
      if (p.is_interval) {
        for (const auto& iv : jp.at("intervals")) p.intervals.emplace_back(iv.at(0).get<double>(), iv.at(1).get<double>());
      } else {
        p.values = jp.at("values").get<std::vector<std::string>>();
      }
      p.text = jp.at("text").get<std::string>();
      sl.predicates.push_back(std::move(p));
    }
    sl.n = jsl.at("support").get<Index>();
    sl.k = jsl.at("correct").get<Index>();
    sl.performance = jsl.at("performance").get<double>();
    sl.p_value = jsl.at("p_value").get<double>();
    sl.heuristic = jsl.at("heuristic").get<std::string>();
    sl.order = jsl.at("order").get<int>();
    r.slices.push_back(std::move(sl));
  }
  return r;
}

std::string render_markdown(const RunReport& report) {
  std::ostringstream out;
  const auto& s = report.settings;
  out << "# Under-performing slices\n\n";
  out << "| records | correct | accuracy | CI low | CI high |\n";
  out << "|---|---|---|---|---|\n";
  out << "| " << report.N << " | " << report.K << " | " << format_performance(report.metric) << " | "
      << format_performance(report.ci_low) << " | " << format_performance(report.ci_high) << " |\n\n";
  out << "Filters: support >= " << s.min_support << ", performance <= " << format_performance(s.perf_threshold)
      << ", p-value < " << format_number(s.p_value_max) << " (" << s.ci_method << " interval at level "
      << format_number(s.ci_level) << ", gap " << format_number(s.gap) << ").\n\n";

  out << "## Candidates and reported slices\n\n";
  out << "| heuristic | order | cand | rep |\n|---|---|---|---|\n";
  for (const auto& g : report.groups) {
    out << "| " << g.heuristic << " | " << g.order << " | " << g.candidates << " | " << g.reported << " |\n";
  }

  out << "\n## Support of reported slices\n\n";
  out << "| heuristic | order | # | MIN | AVG | MAX | STD |\n|---|---|---|---|---|---|---|\n";
  const auto num = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *v);
    return std::string(buf);
  };
  for (const auto& g : report.groups) {
    out << "| " << g.heuristic << " | " << g.order << " | " << g.supports.count << " | " << num(g.supports.min)
        << " | " << num(g.supports.avg) << " | " << num(g.supports.max) << " | " << num(g.supports.std) << " |\n";
  }

  out << "\n## Reported slices\n\n";
  out << "| ATTR | VALUE | SUP | PERF | p-val | heuristic | order |\n|---|---|---|---|---|---|---|\n";
  for (const auto& sl : report.slices) {
    out << "| " << markdown_cell(feature_list(sl, "; ")) << " | " << markdown_cell(predicate_list(sl, "; "))
        << " | " << sl.n << " | " << format_performance(sl.performance) << " | " << format_pvalue(sl.p_value)
        << " | " << sl.heuristic << " | " << sl.order << " |\n";
  }
  return out.str();
}

std::string render_csv(const RunReport& report) {
  std::ostringstream out;
  out << "features,predicate,heuristic,order,support,correct,performance,p_value\n";
  for (const auto& sl : report.slices) {
    out << csv_cell(feature_list(sl, ";")) << ',' << csv_cell(predicate_list(sl, "; ")) << ',' << sl.heuristic
        << ',' << sl.order << ',' << sl.n << ',' << sl.k << ',' << format_number(sl.performance) << ','
        << format_number(sl.p_value) << '\n';
  }
  return out.str();
}

}  // namespace slicemine::report
