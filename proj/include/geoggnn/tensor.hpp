#pragma once

#include <stdexcept>
#include <string>

#include "geoggnn/types.hpp"

namespace geoggnn {

/// Matrix product with an explicit dimension check. Eigen would assert in
/// debug builds and silently misbehave in release; callers here get a
/// descriptive exception instead.
template <typename DerivedA, typename DerivedB>
Matrix matmul(const Eigen::MatrixBase<DerivedA>& a,
              const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument(
        "matmul: inner dimensions differ (" + std::to_string(a.rows()) + "x" +
        std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
        std::to_string(b.cols()) + ")");
  }
  return a * b;
}

/// Elementwise max(0, x).
template <typename Derived>
Matrix relu(const Eigen::MatrixBase<Derived>& a) {
  return a.cwiseMax(Scalar(0));
}

/// Row-wise softmax with max-subtraction so large logits cannot overflow.
template <typename Derived>
Matrix softmax_rows(const Eigen::MatrixBase<Derived>& a) {
  Matrix out(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    const Scalar m = a.row(i).maxCoeff();
    RowVector e = (a.row(i).array() - m).exp();
    out.row(i) = e / e.sum();
  }
  return out;
}

inline bool all_finite(const Matrix& a) { return a.allFinite(); }

/// Argmax per row; ties resolve to the lowest column index.
Labels argmax_rows(const Matrix& a);

/// Column stats and z-scored data from standardize_columns. The fitted
/// mean/std can be replayed on held-out rows via apply_standardization.
struct Standardized {
  Matrix data;
  RowVector mean;
  RowVector std;  // population (divide by n); 0 marks a constant column
};

/// Z-scores each column with the population standard deviation.
/// Constant columns map to all zeros. Requires at least 2 rows.
Standardized standardize_columns(const Matrix& a);

/// Applies previously fitted column stats; columns with std 0 map to zeros.
Matrix apply_standardization(const Matrix& a, const RowVector& mean,
                             const RowVector& std);

}  // namespace geoggnn
