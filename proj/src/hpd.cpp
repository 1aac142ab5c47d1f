#include "slicemine/hpd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace slicemine::hpd {

namespace {

constexpr double kAccuracyTolerance = 1e-12;

// Start of the leftmost minimum-width window of m consecutive values.
std::size_t shortest_start(std::span<const double> v, std::size_t m) {
  std::size_t best = 0;
  double best_width = v[m - 1] - v[0];
  for (std::size_t i = 1; i + m <= v.size(); ++i) {
    const double w = v[i + m - 1] - v[i];
    if (w < best_width) {
      best_width = w;
      best = i;
    }
  }
  return best;
}

// Sorted (value, correct) sample with prefix counts of correct records.
class SortedSample {
 public:
  SortedSample() = default;
  SortedSample(std::vector<double> values, std::vector<char> correct)
      : values_(std::move(values)), correct_(std::move(correct)) {
    rebuild();
  }

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  // Half-open index range of records whose value lies in the interval.
  std::pair<std::size_t, std::size_t> range(const Interval& iv) const {
    const auto b = std::lower_bound(values_.begin(), values_.end(), iv.low);
    const auto e = std::upper_bound(b, values_.end(), iv.high);
    return {static_cast<std::size_t>(b - values_.begin()), static_cast<std::size_t>(e - values_.begin())};
  }

  Counts counts(std::size_t b, std::size_t e) const {
    return {static_cast<Index>(e - b), static_cast<Index>(prefix_[e] - prefix_[b])};
  }
  Counts counts(const Interval& iv) const {
    const auto [b, e] = range(iv);
    return counts(b, e);
  }

  void erase(std::size_t b, std::size_t e) {
    values_.erase(values_.begin() + static_cast<std::ptrdiff_t>(b), values_.begin() + static_cast<std::ptrdiff_t>(e));
    correct_.erase(correct_.begin() + static_cast<std::ptrdiff_t>(b), correct_.begin() + static_cast<std::ptrdiff_t>(e));
    rebuild();
  }

 private:
  void rebuild() {
    prefix_.assign(values_.size() + 1, 0);
    for (std::size_t i = 0; i < values_.size(); ++i) prefix_[i + 1] = prefix_[i] + (correct_[i] ? 1 : 0);
  }

  std::vector<double> values_;
  std::vector<char> correct_;
  std::vector<Index> prefix_;
};

double accuracy(const Counts& c) { return static_cast<double>(c.k) / static_cast<double>(c.n); }

// Contiguous run of under-performing strips on one side of the shrinking
// interval.
struct StripRun {
  Interval span;
  int strips = 0;
};

}  // namespace

void HpdConfig::validate() const {
  if (!(min_density_floor > 0.0 && min_density_floor < initial_density && initial_density <= 1.0)) {
    throw std::invalid_argument("HPD densities must satisfy 0 < min_density_floor < initial_density <= 1");
  }
  if (!(epsilon > 0.0 && epsilon < initial_density)) {
    throw std::invalid_argument("HPD epsilon must satisfy 0 < epsilon < initial_density");
  }
}

Index window_size(Index len, double proportion) {
  // The small slack keeps products like 0.6 * 5 from rounding up to 4.
  const auto m = static_cast<Index>(std::ceil(proportion * static_cast<double>(len) - 1e-9));
  return std::clamp<Index>(m, 1, len);
}

Interval shortest_interval(std::span<const double> sorted_values, double proportion) {
  if (sorted_values.empty()) throw std::invalid_argument("shortest_interval: empty sample");
  if (!(proportion > 0.0 && proportion <= 1.0)) throw std::invalid_argument("shortest_interval: proportion must lie in (0, 1]");
  const auto m = static_cast<std::size_t>(window_size(static_cast<Index>(sorted_values.size()), proportion));
  const std::size_t i = shortest_start(sorted_values, m);
  return {sorted_values[i], sorted_values[i + m - 1]};
}

ShrinkResult shrink_step(std::span<const double> sorted_values, const Interval& current, double target_density) {
  if (!(target_density > 0.0)) throw std::invalid_argument("shrink_step: target density leaves no records");
  const auto b = static_cast<std::size_t>(std::lower_bound(sorted_values.begin(), sorted_values.end(), current.low) - sorted_values.begin());
  const auto e = static_cast<std::size_t>(std::upper_bound(sorted_values.begin(), sorted_values.end(), current.high) - sorted_values.begin());
  if (b >= e) throw std::invalid_argument("shrink_step: current interval holds no records");
  const auto inside = sorted_values.subspan(b, e - b);
  const auto m = std::min<std::size_t>(
      static_cast<std::size_t>(window_size(static_cast<Index>(sorted_values.size()), target_density)), inside.size());
  const std::size_t j = shortest_start(inside, m);

  ShrinkResult out;
  out.inner = {inside[j], inside[j + m - 1]};
  const auto left_end = std::lower_bound(inside.begin(), inside.end(), out.inner.low);
  if (left_end != inside.begin()) out.left_strip = Interval{inside.front(), *(left_end - 1)};
  const auto right_begin = std::upper_bound(inside.begin(), inside.end(), out.inner.high);
  if (right_begin != inside.end()) out.right_strip = Interval{*right_begin, inside.back()};
  return out;
}

std::vector<HpdCandidate> hpd_scan(const Eigen::ArrayXd& values, const Mask& correctness, const HpdConfig& config,
                                   const IntervalEvaluator& evaluate) {
  config.validate();
  if (values.size() != correctness.size()) throw std::invalid_argument("hpd_scan: misaligned arrays");

  std::vector<Index> order;
  for (Index i = 0; i < values.size(); ++i) {
    if (!std::isnan(values[i])) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values[a] < values[b]; });
  std::vector<double> sorted_values;
  std::vector<char> sorted_correct;
  for (Index i : order) {
    sorted_values.push_back(values[i]);
    sorted_correct.push_back(correctness[i] ? 1 : 0);
  }
  const SortedSample original(sorted_values, sorted_correct);
  SortedSample working(std::move(sorted_values), std::move(sorted_correct));

  const auto total = static_cast<double>(original.size());
  const double floor_records = config.min_density_floor * total;
  std::vector<HpdCandidate> out;
  if (original.size() < 2) return out;

  const auto emit = [&](const Interval& iv) {
    if (std::any_of(out.begin(), out.end(), [&](const HpdCandidate& c) { return c.interval == iv; })) return;
    const Counts c = evaluate ? evaluate(iv) : original.counts(iv);
    if (c.n >= 1) out.push_back({iv, c.n, c.k});
  };

  while (working.size() >= 2 && static_cast<double>(working.size()) >= floor_records - 1e-9) {
    const auto w = static_cast<Index>(working.size());
    Interval current = shortest_interval(working.values(), config.initial_density);
    double previous = accuracy(working.counts(current));
    std::optional<StripRun> runs[2];

    const auto flush = [&](int side) {
      if (runs[side] && runs[side]->strips >= 2) emit(runs[side]->span);
      runs[side].reset();
    };

    for (int step = 1;; ++step) {
      const double density = config.initial_density - step * config.epsilon;
      if (density <= 1e-12) break;
      if (static_cast<double>(window_size(w, density)) < floor_records - 1e-9) break;

      const ShrinkResult shrunk = shrink_step(working.values(), current, density);
      const double now = accuracy(working.counts(shrunk.inner));
      if (now < previous - kAccuracyTolerance) emit(shrunk.inner);
      const bool increased = now > previous + kAccuracyTolerance;

      const std::optional<Interval>* strips[2] = {&shrunk.left_strip, &shrunk.right_strip};
      for (int side = 0; side < 2; ++side) {
        const auto& strip = *strips[side];
        const bool under = increased && strip && accuracy(working.counts(*strip)) < previous - kAccuracyTolerance;
        if (!under) {
          flush(side);
          continue;
        }
        emit(*strip);
        if (!runs[side]) {
          runs[side] = StripRun{*strip, 1};
        } else if (side == 0) {
          runs[side]->span.high = strip->high;
          ++runs[side]->strips;
        } else {
          runs[side]->span.low = strip->low;
          ++runs[side]->strips;
        }
      }
      current = shrunk.inner;
      previous = now;
    }
    flush(0);
    flush(1);

    // Drop the densest range reached and rescan what is left.
    const auto [b, e] = working.range(current);
    working.erase(b, e);
  }
  return out;
}

}  // namespace slicemine::hpd
