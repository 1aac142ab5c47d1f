#include "slicemine/slice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slicemine {

FeaturePredicate make_interval(double low, double high) {
  if (!(low <= high)) throw std::invalid_argument("interval requires low <= high");
  return IntervalUnion{{Interval{low, high}}};
}

FeaturePredicate make_values(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("value set must not be empty");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return ValueSet{std::move(values)};
}

bool matches(const FeaturePredicate& predicate, double value) {
  if (std::isnan(value)) return false;
  if (const auto* u = std::get_if<IntervalUnion>(&predicate)) {
    return std::any_of(u->intervals.begin(), u->intervals.end(), [&](const Interval& iv) { return iv.contains(value); });
  }
  const auto& s = std::get<ValueSet>(predicate).values;
  return std::binary_search(s.begin(), s.end(), value);
}

Mask member_mask(const FeaturePredicate& predicate, const Eigen::ArrayXd& column) {
  if (const auto* u = std::get_if<IntervalUnion>(&predicate)) {
    Mask m = Mask::Constant(column.size(), false);
    // NaN compares false on both sides, so missing values never match.
    for (const auto& iv : u->intervals) m = m || (column >= iv.low && column <= iv.high);
    return m;
  }
  Mask m(column.size());
  for (Index i = 0; i < column.size(); ++i) m[i] = matches(predicate, column[i]);
  return m;
}

std::string_view heuristic_name(Heuristic h) {
  switch (h) {
    case Heuristic::Categorical:
      return "categorical";
    case Heuristic::Hpd:
      return "hpd";
    case Heuristic::DecisionTree:
      return "dt";
  }
  return "?";
}

Heuristic parse_heuristic(std::string_view name) {
  if (name == "categorical") return Heuristic::Categorical;
  if (name == "hpd") return Heuristic::Hpd;
  if (name == "dt") return Heuristic::DecisionTree;
  throw ConfigError("unknown heuristic '" + std::string(name) + "' (expected categorical, hpd or dt)");
}

bool Slice::uses(Index feature) const {
  return std::any_of(terms.begin(), terms.end(), [&](const SliceTerm& t) { return t.feature == feature; });
}

Slice Slice::with_term(SliceTerm term, Heuristic tag) const {
  if (uses(term.feature)) throw std::invalid_argument("slice already constrains this feature");
  Slice out{terms, tag};
  const auto pos = std::upper_bound(out.terms.begin(), out.terms.end(), term.feature,
                                    [](Index f, const SliceTerm& t) { return f < t.feature; });
  out.terms.insert(pos, std::move(term));
  return out;
}

Mask membership(const Dataset& dataset, const Slice& slice) {
  Mask m = Mask::Constant(dataset.n_records(), true);
  for (const auto& t : slice.terms) m = m && member_mask(t.predicate, dataset.feature(t.feature).values);
  return m;
}

void Filters::validate() const {
  if (min_support < 2) throw ConfigError("minimal support must be at least 2");
  if (!(p_value_max > 0.0 && p_value_max < 1.0)) throw ConfigError("p-value threshold must lie in (0, 1)");
}

}  // namespace slicemine
