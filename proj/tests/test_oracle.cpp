#include <doctest.h>

#include <random>
#include <sstream>

#include <boost/math/distributions/hypergeometric.hpp>

#include "fixtures.hpp"
#include "slicemine/oracle.hpp"

using namespace slicemine;
using oracle::ExactRational;

TEST_CASE("exact binomials") {
  CHECK(oracle::exact_choose(10, 4) == 210);
  CHECK(oracle::exact_choose(52, 5) == 2598960);
  CHECK(oracle::exact_choose(5, 6) == 0);
  CHECK(oracle::exact_choose(100, 50) == oracle::BigInt("100891344545564193334812497256"));
}

TEST_CASE("exact tail values") {
  CHECK(oracle::exact_hypergeom_pvalue(10, 5, 4, 1) == ExactRational(55, 210));
  CHECK(oracle::exact_hypergeom_pvalue(10, 5, 4, 4) == 1);
  CHECK(oracle::exact_hypergeom_pvalue(300, 230, 21, 21) == 1);
  CHECK(oracle::to_double(oracle::exact_hypergeom_pvalue(300, 230, 21, 14)) == doctest::Approx(0.193).epsilon(0.01));
  CHECK_THROWS(oracle::exact_hypergeom_pvalue(2001, 5, 4, 1));
  CHECK_THROWS(oracle::exact_hypergeom_pvalue(10, 5, 4, 5));
}

TEST_CASE("the exact tail agrees with an independent cdf") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto N = static_cast<std::int64_t>(1 + rng() % 400);
    const auto K = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(N + 1));
    const auto n = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(N + 1));
    const auto lo = std::max<std::int64_t>(0, n - (N - K));
    const auto hi = std::min(n, K);
    const auto k = lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    const boost::math::hypergeometric_distribution<double> law(static_cast<unsigned>(K), static_cast<unsigned>(n),
                                                               static_cast<unsigned>(N));
    const double reference = boost::math::cdf(law, static_cast<unsigned>(k));
    CHECK(oracle::to_double(oracle::exact_hypergeom_pvalue(N, K, n, k)) == doctest::Approx(reference).epsilon(1e-9));
  }
}

TEST_CASE("exhaustive shortest interval") {
  const std::vector<double> v{0, 1, 2, 3, 10};
  CHECK(oracle::exhaustive_shortest_interval(v, 0.6) == Interval{0, 2});
  CHECK(oracle::exhaustive_shortest_interval(v, 1.0) == Interval{0, 10});
  CHECK(oracle::exhaustive_shortest_interval(v, 0.2) == Interval{0, 0});
  const std::vector<double> ties{0, 1, 5, 6};
  CHECK(oracle::exhaustive_shortest_interval(ties, 0.5) == Interval{0, 1});
}

TEST_CASE("exhaustive categorical slices") {
  // 40 records, 30 correct; colour = red holds 10 records with 2 correct.
  std::ostringstream csv;
  csv << "colour,label,pred\n";
  for (int i = 0; i < 40; ++i) {
    const bool red = i < 10;
    const bool correct = red ? i < 2 : true;
    csv << (red ? "red" : (i % 2 ? "blue" : "green")) << ",1," << (correct ? 1 : 0) << '\n';
  }
  const Dataset d = fixtures::load_csv(csv.str());
  const auto red = *d.feature(0).value_of("red");
  const auto found = oracle::exhaustive_categorical_slices(d, Filters{2, 0.5, 0.05});
  REQUIRE(found.size() == 1);
  CHECK(found[0].terms[0].predicate == make_values({red}));

  CHECK(oracle::exhaustive_categorical_slices(d, Filters{11, 0.5, 0.05}).empty());
  CHECK(oracle::exhaustive_categorical_slices(d, Filters{2, 0.1, 0.05}).empty());
  CHECK(oracle::exhaustive_categorical_slices(d, Filters{2, 0.5, 1e-9}).empty());
}
