#ifndef SLICEMINE_STATS_HPP_
#define SLICEMINE_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <type_traits>

#include <Eigen/Core>

namespace slicemine::stats {

namespace detail {

// Working precision for the log-gamma differences. Plain doubles lose ~1e-9
// absolute accuracy at n ~ 1e6, so they are widened to long double.
template <typename Scalar>
using Working = std::conditional_t<std::is_same_v<Scalar, double> || std::is_same_v<Scalar, float>,
                                   long double, Scalar>;

}  // namespace detail

/// Natural log of the binomial coefficient C(n, r).
template <typename Scalar = double>
Scalar log_choose(std::int64_t n, std::int64_t r) {
  if (n < 0 || r < 0 || r > n) throw std::invalid_argument("log_choose: require 0 <= r <= n");
  using W = detail::Working<Scalar>;
  using std::lgamma;
  using std::log;
  const std::int64_t m = std::min(r, n - r);
  if (m <= 16) {
    // Short products: summing log((n - m + i) / i) avoids the cancellation of
    // two huge log-gamma values.
    W acc(0);
    for (std::int64_t i = 1; i <= m; ++i) acc += log(W(n - m + i) / W(i));
    return static_cast<Scalar>(acc);
  }
  return static_cast<Scalar>(lgamma(W(n + 1)) - lgamma(W(r + 1)) - lgamma(W(n - r + 1)));
}

/// Population of N records with K successes; a draw of n with k successes.
struct HyperGeomParams {
  std::int64_t N = 0;
  std::int64_t K = 0;
  std::int64_t n = 0;
  std::int64_t k = 0;

  std::int64_t support_min() const { return std::max<std::int64_t>(0, n - (N - K)); }
  std::int64_t support_max() const { return std::min(n, K); }

  /// Checks N, K, n only.
  void validate_population() const;
  /// Checks the full invariant 0 <= k <= n <= N, k <= K, n - k <= N - K.
  void validate() const;
};

template <typename Scalar = double>
Scalar hypergeom_pmf(const HyperGeomParams& p, std::int64_t x) {
  p.validate_population();
  if (x < p.support_min() || x > p.support_max()) return Scalar(0);
  using W = detail::Working<Scalar>;
  using std::exp;
  const W lp = log_choose<W>(p.K, x) + log_choose<W>(p.N - p.K, p.n - x) - log_choose<W>(p.N, p.n);
  return static_cast<Scalar>(exp(lp));
}

/// Lower-tailed p-value: sum of the pmf over x = 0..k, added in ascending x
/// with Neumaier compensation and clamped to [0, 1].
double hypergeom_lower_pvalue(const HyperGeomParams& p);

/// Natural log of the same tail, by log-sum-exp. Stays finite where the
/// p-value itself underflows a double.
double hypergeom_lower_log_pvalue(const HyperGeomParams& p);

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
};

/// Two-sided standard normal quantile for a central coverage `level`.
double normal_critical_value(double level);

/// Wilson score interval for k successes out of n.
ConfidenceInterval wilson_interval(std::int64_t k, std::int64_t n, double level = 0.95);

/// Lower-tail test against a fixed population (N, K). Keeps a table of
/// log-factorials so repeated slice evaluations avoid re-running lgamma.
class LowerTailTest {
 public:
  LowerTailTest(std::int64_t N, std::int64_t K);

  std::int64_t population() const { return N_; }
  std::int64_t successes() const { return K_; }

  double pvalue(std::int64_t n, std::int64_t k) const;

 private:
  long double log_choose_cached(std::int64_t n, std::int64_t r) const;

  std::int64_t N_;
  std::int64_t K_;
  Eigen::Array<long double, Eigen::Dynamic, 1> log_factorial_;
};

}  // namespace slicemine::stats

#endif  // SLICEMINE_STATS_HPP_
