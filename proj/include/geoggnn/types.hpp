#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoggnn {

using Scalar = double;
using Index = Eigen::Index;

/// Dense row-major matrix of 64-bit reals. Row i is node/sample i throughout.
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// Class ids in [0, C); one entry per node/sample.
using Labels = std::vector<int>;
/// Node subset given as sorted unique indices into [0, N).
using Mask = std::vector<Index>;

/// Bad or inconsistent configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input data that violates a documented invariant (CLI exit code 2).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite values or numerical breakdown during computation (CLI exit code 3).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace geoggnn
