#include "slicemine/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

namespace slicemine::stats {

namespace {

class NeumaierSum {
 public:
  void add(long double x) {
    const long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  long double value() const { return sum_ + comp_; }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

double clamp_unit(long double v) { return static_cast<double>(std::clamp(v, 0.0L, 1.0L)); }

}  // namespace

void HyperGeomParams::validate_population() const {
  if (N < 0 || K < 0 || K > N || n < 0 || n > N) {
    throw std::invalid_argument("hypergeometric parameters out of range: N=" + std::to_string(N) +
                                " K=" + std::to_string(K) + " n=" + std::to_string(n));
  }
}

void HyperGeomParams::validate() const {
  validate_population();
  if (k < 0 || k > n || k > K || n - k > N - K) {
    throw std::invalid_argument("hypergeometric observation out of range: k=" + std::to_string(k) +
                                " with N=" + std::to_string(N) + " K=" + std::to_string(K) +
                                " n=" + std::to_string(n));
  }
}

double hypergeom_lower_pvalue(const HyperGeomParams& p) {
  p.validate();
  const std::int64_t hi = std::min(p.k, p.support_max());
  if (hi >= p.support_max()) return 1.0;
  const long double log_total = log_choose<long double>(p.N, p.n);
  NeumaierSum sum;
  for (std::int64_t x = p.support_min(); x <= hi; ++x) {
    sum.add(std::exp(log_choose<long double>(p.K, x) +
                     log_choose<long double>(p.N - p.K, p.n - x) - log_total));
  }
  return clamp_unit(sum.value());
}

double hypergeom_lower_log_pvalue(const HyperGeomParams& p) {
  p.validate();
  if (p.k >= p.support_max()) return 0.0;
  const long double log_total = log_choose<long double>(p.N, p.n);
  std::vector<long double> terms;
  for (std::int64_t x = p.support_min(); x <= p.k; ++x) {
    terms.push_back(log_choose<long double>(p.K, x) + log_choose<long double>(p.N - p.K, p.n - x) - log_total);
  }
  const long double top = *std::max_element(terms.begin(), terms.end());
  NeumaierSum sum;
  for (long double t : terms) sum.add(std::exp(t - top));
  return static_cast<double>(std::min(0.0L, top + std::log(sum.value())));
}

double normal_critical_value(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0, 1)");
  const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, 0.5 + level / 2.0);
}

ConfidenceInterval wilson_interval(std::int64_t k, std::int64_t n, double level) {
  if (n <= 0 || k < 0 || k > n) throw std::invalid_argument("wilson_interval: require 0 <= k <= n, n > 0");
  const double z = normal_critical_value(level);
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
  ConfidenceInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  // The bounds are exactly 0 and 1 at the boundaries; rounding would leave dust.
  if (k == 0) ci.low = 0.0;
  if (k == n) ci.high = 1.0;
  return ci;
}

LowerTailTest::LowerTailTest(std::int64_t N, std::int64_t K) : N_(N), K_(K) {
  if (N < 1 || K < 0 || K > N) throw std::invalid_argument("LowerTailTest: require 0 <= K <= N, N >= 1");
  log_factorial_.resize(N + 1);
  for (std::int64_t i = 0; i <= N; ++i) log_factorial_[i] = std::lgamma(static_cast<long double>(i) + 1.0L);
}

long double LowerTailTest::log_choose_cached(std::int64_t n, std::int64_t r) const {
  return log_factorial_[n] - log_factorial_[r] - log_factorial_[n - r];
}

double LowerTailTest::pvalue(std::int64_t n, std::int64_t k) const {
  const HyperGeomParams p{N_, K_, n, k};
  p.validate();
  if (k >= p.support_max()) return 1.0;
  const long double log_total = log_choose_cached(N_, n);
  NeumaierSum sum;
  for (std::int64_t x = p.support_min(); x <= k; ++x) {
    sum.add(std::exp(log_choose_cached(K_, x) + log_choose_cached(N_ - K_, n - x) - log_total));
  }
  return clamp_unit(sum.value());
}

}  // namespace slicemine::stats
