#ifndef SLICEMINE_COMMON_HPP_
#define SLICEMINE_COMMON_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace slicemine {

using Index = Eigen::Index;

/// Per-record boolean column (correctness, slice membership, missingness).
using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Problems with the input data itself (unreadable file, bad rows, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problems with how the tool was configured (unknown columns, bad knobs).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slicemine

#endif  // SLICEMINE_COMMON_HPP_
