#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "slicemine/hpd.hpp"

using namespace slicemine;
using hpd::HpdConfig;

namespace {

// Every window of m consecutive values; leftmost strictly-narrowest wins.
Interval brute_force_window(const std::vector<double>& v, std::size_t m) {
  Interval best{v[0], v[m - 1]};
  for (std::size_t i = 1; i + m <= v.size(); ++i) {
    if (v[i + m - 1] - v[i] < best.width()) best = {v[i], v[i + m - 1]};
  }
  return best;
}

std::vector<double> random_sorted(std::mt19937_64& rng, std::size_t len) {
  std::vector<double> v(len);
  // Coarse grid so that equal widths (ties) actually happen.
  for (auto& x : v) x = std::floor(fixtures::unit(rng) * 50.0);
  std::sort(v.begin(), v.end());
  return v;
}

struct Sample {
  Eigen::ArrayXd values;
  Mask correct;
};

Sample banded_sample(std::uint64_t seed, int n, std::vector<std::pair<double, double>> bands) {
  std::mt19937_64 rng(seed);
  Sample s{Eigen::ArrayXd(n), Mask(n)};
  for (int i = 0; i < n; ++i) {
    s.values[i] = fixtures::unit(rng);
    s.correct[i] = std::none_of(bands.begin(), bands.end(),
                                [&](const auto& b) { return s.values[i] >= b.first && s.values[i] <= b.second; });
  }
  return s;
}

double accuracy(const hpd::HpdCandidate& c) { return static_cast<double>(c.k) / static_cast<double>(c.n); }

}  // namespace

TEST_CASE("shortest_interval examples") {
  const std::vector<double> v{0, 1, 2, 3, 10};
  CHECK(hpd::shortest_interval(v, 0.6) == Interval{0, 2});
  CHECK(hpd::shortest_interval(v, 1.0) == Interval{0, 10});
  const std::vector<double> single{7};
  CHECK(hpd::shortest_interval(single, 0.5) == Interval{7, 7});
  CHECK_THROWS(hpd::shortest_interval(std::vector<double>{}, 0.5));
  CHECK_THROWS(hpd::shortest_interval(v, 0.0));
}

TEST_CASE("window_size rounds up without float dust") {
  CHECK(hpd::window_size(5, 0.6) == 3);
  CHECK(hpd::window_size(10, 0.85) == 9);
  CHECK(hpd::window_size(1000, 0.1) == 100);
  CHECK(hpd::window_size(3, 0.01) == 1);
  CHECK(hpd::window_size(3, 1.0) == 3);
}

TEST_CASE("shortest_interval is minimal and monotone in the proportion") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto v = random_sorted(rng, 1 + rng() % 200);
    double previous_width = -1.0;
    for (int tenth = 1; tenth <= 10; ++tenth) {
      const double p = tenth / 10.0;
      const auto got = hpd::shortest_interval(v, p);
      const auto m = static_cast<std::size_t>(hpd::window_size(static_cast<Index>(v.size()), p));
      CHECK(got == brute_force_window(v, m));
      CHECK(got.width() >= previous_width);
      previous_width = got.width();
    }
  }
}

TEST_CASE("shrink_step discards one record on each side") {
  const std::vector<double> v{0, 2, 3, 4, 5, 6, 7, 8, 9, 11};
  const auto r = hpd::shrink_step(v, Interval{0, 11}, 0.8);
  CHECK(r.inner == Interval{2, 9});
  REQUIRE(r.left_strip);
  REQUIRE(r.right_strip);
  CHECK(*r.left_strip == Interval{0, 0});
  CHECK(*r.right_strip == Interval{11, 11});

  const auto same = hpd::shrink_step(v, Interval{0, 11}, 1.0);
  CHECK(same.inner == Interval{0, 11});
  CHECK_FALSE(same.left_strip);
  CHECK_FALSE(same.right_strip);

  CHECK_THROWS(hpd::shrink_step(v, Interval{0, 11}, 0.0));
}

TEST_CASE("shrink_step searches only inside the current interval") {
  const std::vector<double> v{0, 1, 2, 3, 4, 20, 20.5, 21, 21.5};
  // At 4/9 density the tightest window overall is [20, 21.5], but it lies
  // outside the current interval.
  const auto r = hpd::shrink_step(v, Interval{0, 4}, 4.0 / 9.0);
  CHECK(r.inner == Interval{0, 3});
  CHECK_FALSE(r.left_strip);
  REQUIRE(r.right_strip);
  CHECK(*r.right_strip == Interval{4, 4});
}

TEST_CASE("HpdConfig validation") {
  CHECK_NOTHROW(HpdConfig{}.validate());
  CHECK_THROWS(HpdConfig{0.9, 0.05, 0.95}.validate());
  CHECK_THROWS(HpdConfig{0.9, 0.0, 0.1}.validate());
  CHECK_THROWS(HpdConfig{1.2, 0.05, 0.1}.validate());
}

TEST_CASE("hpd_scan finds nothing when every record is correct") {
  const auto s = banded_sample(1, 500, {});
  CHECK(hpd::hpd_scan(s.values, s.correct, HpdConfig{}).empty());
}

TEST_CASE("hpd_scan recovers a planted faulty band") {
  const auto s = banded_sample(42, 1000, {{0.40, 0.45}});
  const auto found = hpd::hpd_scan(s.values, s.correct, HpdConfig{});
  const bool covered = std::any_of(found.begin(), found.end(), [](const hpd::HpdCandidate& c) {
    return c.interval.low <= 0.40 && c.interval.high >= 0.45 && accuracy(c) < 0.5;
  });
  CHECK(covered);
}

TEST_CASE("hpd_scan reports each of two planted bands") {
  const auto s = banded_sample(7, 1000, {{0.10, 0.15}, {0.80, 0.85}});
  const auto found = hpd::hpd_scan(s.values, s.correct, HpdConfig{});
  std::vector<hpd::HpdCandidate> first, second;
  for (const auto& c : found) {
    if (accuracy(c) >= 0.5) continue;
    if (c.interval.low <= 0.15 && c.interval.high >= 0.10) first.push_back(c);
    if (c.interval.low <= 0.85 && c.interval.high >= 0.80) second.push_back(c);
  }
  REQUIRE_FALSE(first.empty());
  REQUIRE_FALSE(second.empty());
  const bool disjoint = std::any_of(first.begin(), first.end(), [&](const auto& a) {
    return std::any_of(second.begin(), second.end(), [&](const auto& b) { return a.interval.high < b.interval.low; });
  });
  CHECK(disjoint);
}

TEST_CASE("hpd_scan candidates carry exact counts and are deterministic") {
  auto s = banded_sample(3, 800, {{0.2, 0.26}, {0.7, 0.71}});
  for (int i = 0; i < 800; i += 37) s.values[i] = std::numeric_limits<double>::quiet_NaN();
  const auto found = hpd::hpd_scan(s.values, s.correct, HpdConfig{});
  REQUIRE_FALSE(found.empty());
  for (const auto& c : found) {
    Index n = 0, k = 0;
    for (Index i = 0; i < s.values.size(); ++i) {
      if (c.interval.contains(s.values[i])) {
        ++n;
        k += s.correct[i] ? 1 : 0;
      }
    }
    CHECK(c.n == n);
    CHECK(c.k == k);
    CHECK(c.interval.low <= c.interval.high);
  }
  const auto again = hpd::hpd_scan(s.values, s.correct, HpdConfig{});
  REQUIRE(again.size() == found.size());
  for (std::size_t i = 0; i < found.size(); ++i) CHECK(again[i].interval == found[i].interval);
}

TEST_CASE("hpd_scan uses the supplied evaluator for counts") {
  const auto s = banded_sample(5, 300, {{0.5, 0.6}});
  const auto found = hpd::hpd_scan(s.values, s.correct, HpdConfig{}, [](const Interval&) {
    return hpd::Counts{1000, 10};
  });
  REQUIRE_FALSE(found.empty());
  for (const auto& c : found) {
    CHECK(c.n == 1000);
    CHECK(c.k == 10);
  }
}

TEST_CASE("hpd_scan handles tiny and degenerate samples") {
  Eigen::ArrayXd one(1);
  one << 0.5;
  Mask wrong(1);
  wrong << false;
  CHECK(hpd::hpd_scan(one, wrong, HpdConfig{}).empty());

  Eigen::ArrayXd flat = Eigen::ArrayXd::Constant(50, 3.0);
  Mask mixed(50);
  for (int i = 0; i < 50; ++i) mixed[i] = i % 2 == 0;
  CHECK_NOTHROW(hpd::hpd_scan(flat, mixed, HpdConfig{}));
}
