#include "slicemine/oracle.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include <boost/math/distributions/hypergeometric.hpp>

namespace slicemine::oracle {

BigInt exact_choose(std::int64_t n, std::int64_t r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  BigInt c = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    c *= n - r + i;
    c /= i;  // exact: c holds C(n - r + i, i) here
  }
  return c;
}

ExactRational exact_hypergeom_pvalue(std::int64_t N, std::int64_t K, std::int64_t n, std::int64_t k) {
  if (N > 2000) throw std::invalid_argument("exact oracle is limited to N <= 2000");
  if (N < 0 || K < 0 || K > N || n < 0 || n > N || k < 0 || k > n) {
    throw std::invalid_argument("exact oracle: parameters out of range");
  }
  BigInt numerator = 0;
  for (std::int64_t x = 0; x <= k; ++x) numerator += exact_choose(K, x) * exact_choose(N - K, n - x);
  return ExactRational(numerator, exact_choose(N, n));
}

double to_double(const ExactRational& q) { return q.convert_to<double>(); }

Interval exhaustive_shortest_interval(std::span<const double> sorted_values, double proportion) {
  const auto len = sorted_values.size();
  if (len == 0) throw std::invalid_argument("empty sample");
  // Smallest m with m >= proportion * len, found by counting up.
  std::size_t m = 1;
  while (m < len && static_cast<double>(m) < proportion * static_cast<double>(len) - 1e-9) ++m;
  Interval best{sorted_values[0], sorted_values[m - 1]};
  for (std::size_t i = 0; i + m <= len; ++i) {
    const Interval w{sorted_values[i], sorted_values[i + m - 1]};
    if (w.width() < best.width()) best = w;
  }
  return best;
}

std::vector<Slice> exhaustive_categorical_slices(const Dataset& dataset, const Filters& filters) {
  const Index N = dataset.n_records();
  if (N > 10000) throw std::invalid_argument("categorical oracle is limited to 10^4 records");
  Index K = 0;
  for (Index i = 0; i < N; ++i) K += dataset.correctness()[i] ? 1 : 0;

  std::vector<Slice> out;
  for (Index f = 0; f < dataset.n_features(); ++f) {
    const auto& col = dataset.feature(f);
    if (col.kind() != FeatureKind::Categorical) continue;
    std::map<double, std::pair<Index, Index>> tally;  // value -> (n, k)
    for (Index i = 0; i < N; ++i) {
      const double v = col.values[i];
      if (std::isnan(v)) continue;
      auto& [n, k] = tally[v];
      ++n;
      if (dataset.correctness()[i]) ++k;
    }
    for (const auto& [value, nk] : tally) {
      const auto [n, k] = nk;
      const double performance = static_cast<double>(k) / static_cast<double>(n);
      double p = 0.0;
      if (N <= 2000) {
        p = to_double(exact_hypergeom_pvalue(N, K, n, k));
      } else {
        const boost::math::hypergeometric_distribution<double> law(static_cast<unsigned>(K), static_cast<unsigned>(n),
                                                                   static_cast<unsigned>(N));
        p = boost::math::cdf(law, static_cast<unsigned>(k));
      }
      if (n >= filters.min_support && performance <= filters.perf_threshold && p < filters.p_value_max) {
        out.push_back(Slice{{SliceTerm{f, ValueSet{{value}}}}, Heuristic::Categorical});
      }
    }
  }
  return out;
}

}  // namespace slicemine::oracle
