#ifndef SLICEMINE_ORACLE_HPP_
#define SLICEMINE_ORACLE_HPP_

// Brute-force reference implementations. They are deliberately slow and share
// no code with the fast paths they check.

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "slicemine/dataset.hpp"
#include "slicemine/interval.hpp"
#include "slicemine/slice.hpp"

namespace slicemine::oracle {

using ExactRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Binomial coefficient by exact integer products.
BigInt exact_choose(std::int64_t n, std::int64_t r);

/// Lower tail P(X <= k) of the hypergeometric law as a reduced fraction.
/// Only populations up to N = 2000 are accepted.
ExactRational exact_hypergeom_pvalue(std::int64_t N, std::int64_t K, std::int64_t n, std::int64_t k);

double to_double(const ExactRational& q);

/// Scans every window of ceil(proportion * len) values; leftmost minimum.
Interval exhaustive_shortest_interval(std::span<const double> sorted_values, double proportion);

/// Every (categorical feature, value) slice that passes the filters, by
/// direct counting. Limited to 10^4 records.
std::vector<Slice> exhaustive_categorical_slices(const Dataset& dataset, const Filters& filters);

}  // namespace slicemine::oracle

#endif  // SLICEMINE_ORACLE_HPP_
