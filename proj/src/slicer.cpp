#include "slicemine/slicer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <string>
#include <unordered_set>

#include "slicemine/dtree.hpp"
#include "slicemine/parallel.hpp"

namespace slicemine {

namespace {

// Exact identity of a slice's predicates (bit patterns of every value).
std::string predicate_key(const Slice& s) {
  std::string key;
  const auto put = [&key](double v) {
    char buf[sizeof(double)];
    std::memcpy(buf, &v, sizeof v);
    key.append(buf, sizeof buf);
  };
  for (const auto& t : s.terms) {
    key += 'F' + std::to_string(t.feature);
    if (const auto* u = std::get_if<IntervalUnion>(&t.predicate)) {
      key += 'I';
      for (const auto& iv : u->intervals) {
        put(iv.low);
        put(iv.high);
      }
    } else {
      key += 'V';
      for (double v : std::get<ValueSet>(t.predicate).values) put(v);
    }
  }
  return key;
}

std::vector<EvaluatedSlice> dedupe(std::vector<EvaluatedSlice> slices) {
  std::unordered_set<std::string> seen;
  std::vector<EvaluatedSlice> out;
  for (auto& s : slices) {
    if (seen.insert(predicate_key(s.slice)).second) out.push_back(std::move(s));
  }
  return out;
}

std::vector<EvaluatedSlice> evaluate_all(const Dataset& dataset, std::vector<Slice> slices, unsigned workers) {
  const SliceEvaluator evaluate(dataset);
  auto stats = parallel_map(slices.size(), workers, [&](std::size_t i) { return evaluate(slices[i]); });
  std::vector<EvaluatedSlice> out;
  out.reserve(slices.size());
  for (std::size_t i = 0; i < slices.size(); ++i) out.push_back({std::move(slices[i]), stats[i]});
  return out;
}

dtree::DtConfig tree_config(const SlicerConfig& config, const Filters& filters) {
  return {config.max_depth, filters.min_support, config.max_order};
}

std::vector<std::vector<Index>> feature_subsets(Index n_features, int size) {
  std::vector<std::vector<Index>> out;
  if (size == 2) {
    for (Index a = 0; a < n_features; ++a)
      for (Index b = a + 1; b < n_features; ++b) out.push_back({a, b});
  } else if (size == 3) {
    for (Index a = 0; a < n_features; ++a)
      for (Index b = a + 1; b < n_features; ++b)
        for (Index c = b + 1; c < n_features; ++c) out.push_back({a, b, c});
  }
  return out;
}

// Extends every seed by single-feature analysis of each feature it does not
// use yet, restricted to the seed's members.
std::vector<Slice> condition_on(const Dataset& dataset, const std::vector<Slice>& seeds, const SlicerConfig& config) {
  std::vector<std::pair<std::size_t, Index>> tasks;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    for (Index f = 0; f < dataset.n_features(); ++f) {
      if (!seeds[s].uses(f)) tasks.emplace_back(s, f);
    }
  }
  std::vector<Mask> members = parallel_map(seeds.size(), config.workers,
                                           [&](std::size_t s) { return membership(dataset, seeds[s]); });
  auto found = parallel_map(tasks.size(), config.workers, [&](std::size_t t) {
    const auto [s, f] = tasks[t];
    std::vector<Slice> out;
    for (auto& single : single_feature_slices(dataset, f, members[s], config)) {
      out.push_back(seeds[s].with_term(std::move(single.terms.front()), single.heuristic));
    }
    return out;
  });
  std::vector<Slice> out;
  for (auto& v : found) std::move(v.begin(), v.end(), std::back_inserter(out));
  return out;
}

std::vector<Slice> trees_over(const Dataset& dataset, int subset_size, const SlicerConfig& config,
                              const Filters& filters) {
  const auto subsets = feature_subsets(dataset.n_features(), subset_size);
  const auto tc = tree_config(config, filters);
  auto found = parallel_map(subsets.size(), config.workers,
                            [&](std::size_t i) { return dtree::tree_slices(dataset, subsets[i], tc, filters); });
  std::vector<Slice> out;
  for (auto& v : found) std::move(v.begin(), v.end(), std::back_inserter(out));
  return out;
}

}  // namespace

void SlicerConfig::validate() const {
  if (!use_categorical && !use_hpd && !use_dt) throw ConfigError("at least one heuristic must be enabled");
  if (max_order < 1 || max_order > 3) throw ConfigError("max order must lie in 1..3");
  if (!(p_value_max > 0.0 && p_value_max < 1.0)) throw ConfigError("p-value threshold must lie in (0, 1)");
  if (!(gap >= 0.0 && gap <= 1.0)) throw ConfigError("performance gap must lie in [0, 1]");
  if (!(support_fraction > 0.0 && support_fraction < 1.0)) throw ConfigError("support fraction must lie in (0, 1)");
  if (support_floor < 2) throw ConfigError("support floor must be at least 2");
  if (max_depth < 1) throw ConfigError("tree depth must be positive");
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw ConfigError("confidence level must lie in (0, 1)");
  if (workers < 1) throw ConfigError("worker count must be positive");
  try {
    hpd.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Index min_support(const DatasetSummary& summary, double fraction, Index floor) {
  const Index wrong = summary.N - summary.K;
  if (wrong <= 0) return floor;
  const auto scaled = static_cast<Index>(std::ceil(fraction * static_cast<double>(wrong) - 1e-9));
  return std::max(floor, scaled);
}

double perf_threshold(const DatasetSummary& summary, double gap) {
  return std::clamp(summary.ci_low - gap, 0.0, 1.0);
}

Filters make_filters(const DatasetSummary& summary, const SlicerConfig& config) {
  Filters f;
  f.min_support = min_support(summary, config.support_fraction, config.support_floor);
  f.perf_threshold = perf_threshold(summary, config.gap);
  f.p_value_max = config.p_value_max;
  return f;
}

SliceEvaluator::SliceEvaluator(const Dataset& dataset)
    : dataset_(dataset), test_(dataset.n_records(), dataset.correctness().count()) {}

SliceStats SliceEvaluator::stats_for(const Mask& members) const {
  SliceStats s;
  s.n = members.count();
  if (s.n == 0) return s;
  s.k = (members && dataset_.correctness()).count();
  s.performance = static_cast<double>(s.k) / static_cast<double>(s.n);
  s.p_value = test_.pvalue(s.n, s.k);
  return s;
}

SliceStats SliceEvaluator::operator()(const Slice& slice) const {
  for (const auto& t : slice.terms) {
    if (t.feature < 0 || t.feature >= dataset_.n_features()) throw ConfigError("slice names an unknown feature");
  }
  return stats_for(membership(dataset_, slice));
}

SliceStats evaluate_slice(const Dataset& dataset, const Slice& slice) { return SliceEvaluator(dataset)(slice); }

std::vector<Slice> single_feature_slices(const Dataset& dataset, Index feature, const Mask& restriction,
                                         const SlicerConfig& config) {
  const auto& col = dataset.feature(feature);
  const Mask scope = restriction.size() == 0 ? Mask(col.present()) : Mask(restriction && col.present());
  std::vector<Slice> out;
  if (col.kind() == FeatureKind::Categorical) {
    if (!config.use_categorical) return out;
    std::set<double> values;
    for (Index i = 0; i < col.values.size(); ++i) {
      if (scope[i]) values.insert(col.values[i]);
    }
    for (double v : values) out.push_back(Slice{{SliceTerm{feature, make_values({v})}}, Heuristic::Categorical});
    return out;
  }
  if (!config.use_hpd || scope.count() < 2) return out;
  const Eigen::ArrayXd scoped = scope.select(col.values, std::numeric_limits<double>::quiet_NaN());
  for (const auto& c : hpd::hpd_scan(scoped, dataset.correctness(), config.hpd)) {
    out.push_back(Slice{{SliceTerm{feature, make_interval(c.interval.low, c.interval.high)}}, Heuristic::Hpd});
  }
  return out;
}

std::vector<Slice> generate_one_way(const Dataset& dataset, const SlicerConfig& config, const Filters& filters) {
  const auto tc = tree_config(config, filters);
  auto found = parallel_map(static_cast<std::size_t>(dataset.n_features()), config.workers, [&](std::size_t f) {
    const auto feature = static_cast<Index>(f);
    auto out = single_feature_slices(dataset, feature, Mask(), config);
    if (config.use_dt) {
      const Index subset[] = {feature};
      for (auto& s : dtree::tree_slices(dataset, subset, tc, filters)) out.push_back(std::move(s));
    }
    return out;
  });
  std::vector<Slice> out;
  for (auto& v : found) std::move(v.begin(), v.end(), std::back_inserter(out));
  return out;
}

std::vector<Slice> generate_higher_order(const Dataset& dataset, const std::vector<EvaluatedSlice>& reported_one_way,
                                         const SlicerConfig& config, const Filters& filters) {
  std::vector<Slice> out;
  if (config.max_order < 2) return out;

  std::vector<Slice> seeds;
  for (const auto& r : reported_one_way) {
    if (r.slice.order() == 1) seeds.push_back(r.slice);
  }
  std::vector<Slice> second = condition_on(dataset, seeds, config);
  if (config.use_dt) {
    for (auto& s : trees_over(dataset, 2, config, filters)) second.push_back(std::move(s));
  }
  if (config.max_order < 3) return second;

  std::vector<Slice> seeds3;
  for (const auto& e : dedupe(evaluate_all(dataset, second, config.workers))) {
    if (e.slice.order() == 2 && filters.passes(e.stats)) seeds3.push_back(e.slice);
  }
  out = std::move(second);
  for (auto& s : condition_on(dataset, seeds3, config)) out.push_back(std::move(s));
  if (config.use_dt) {
    for (auto& s : trees_over(dataset, 3, config, filters)) out.push_back(std::move(s));
  }
  return out;
}

std::vector<EvaluatedSlice> filter_and_rank(const std::vector<EvaluatedSlice>& candidates, const Filters& filters,
                                            const Dataset& dataset) {
  std::vector<EvaluatedSlice> kept;
  for (const auto& c : candidates) {
    if (filters.passes(c.stats)) kept.push_back(c);
  }
  kept = dedupe(std::move(kept));
  const auto names = [&](const Slice& s) {
    std::vector<std::string> v;
    for (const auto& t : s.terms) v.push_back(dataset.feature(t.feature).name());
    return v;
  };
  std::stable_sort(kept.begin(), kept.end(), [&](const EvaluatedSlice& a, const EvaluatedSlice& b) {
    if (a.stats.p_value != b.stats.p_value) return a.stats.p_value < b.stats.p_value;
    if (a.stats.n != b.stats.n) return a.stats.n > b.stats.n;
    return names(a.slice) < names(b.slice);
  });
  return kept;
}

SliceRun run_slicer(const Dataset& dataset, const SlicerConfig& config) {
  config.validate();
  SliceRun run;
  run.summary = summarize(dataset, config.ci_level);
  run.filters = make_filters(run.summary, config);

  auto one_way = dedupe(evaluate_all(dataset, generate_one_way(dataset, config, run.filters), config.workers));
  std::vector<EvaluatedSlice> reported_one_way;
  for (const auto& e : one_way) {
    if (run.filters.passes(e.stats)) reported_one_way.push_back(e);
  }
  auto all = std::move(one_way);
  for (auto& e : evaluate_all(dataset, generate_higher_order(dataset, reported_one_way, config, run.filters),
                              config.workers)) {
    all.push_back(std::move(e));
  }
  all = dedupe(std::move(all));

  for (Heuristic h : {Heuristic::Categorical, Heuristic::Hpd, Heuristic::DecisionTree}) {
    for (int order = 1; order <= config.max_order; ++order) run.counts[{h, order}] = {};
  }
  for (const auto& e : all) {
    if (!run.filters.passes_support_and_performance(e.stats)) continue;
    ++run.counts[{e.slice.heuristic, e.slice.order()}].candidates;
    run.candidates.push_back(e);
  }
  run.reported = filter_and_rank(run.candidates, run.filters, dataset);
  for (const auto& e : run.reported) ++run.counts[{e.slice.heuristic, e.slice.order()}].reported;
  return run;
}

}  // namespace slicemine
