#include "geoggnn/tensor.hpp"

#include <cmath>

namespace geoggnn {

Standardized standardize_columns(const Matrix& a) {
  if (a.rows() < 2) {
    throw std::invalid_argument(
        "standardize_columns: need at least 2 rows, got " +
        std::to_string(a.rows()));
  }
  Standardized out;
  out.mean = a.colwise().mean();
  Matrix centered = a.rowwise() - out.mean;
  out.std =
      (centered.array().square().colwise().sum() / Scalar(a.rows())).sqrt();
  out.data = centered;
  for (Index j = 0; j < a.cols(); ++j) {
    if (out.std(j) > Scalar(0)) {
      out.data.col(j) /= out.std(j);
    } else {
      out.data.col(j).setZero();
    }
  }
  return out;
}

Labels argmax_rows(const Matrix& a) {
  Labels out(static_cast<std::size_t>(a.rows()));
  for (Index i = 0; i < a.rows(); ++i) {
    Index best = 0;
    for (Index c = 1; c < a.cols(); ++c) {
      if (a(i, c) > a(i, best)) best = c;
    }
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

Matrix apply_standardization(const Matrix& a, const RowVector& mean,
                             const RowVector& std) {
  if (a.cols() != mean.cols() || a.cols() != std.cols()) {
    throw std::invalid_argument(
        "apply_standardization: column count does not match fitted stats");
  }
  Matrix out = a.rowwise() - mean;
  for (Index j = 0; j < a.cols(); ++j) {
    if (std(j) > Scalar(0)) {
      out.col(j) /= std(j);
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

}  // namespace geoggnn
