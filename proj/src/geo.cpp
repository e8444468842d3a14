#include "geoggnn/geo.hpp"

#include <string>

namespace geoggnn {

void validate(const GeoPoint& p) {
  if (!(p.lat >= -90.0 && p.lat <= 90.0)) {
    throw ValidationError("GeoPoint: latitude " + std::to_string(p.lat) +
                          " outside [-90, 90]");
  }
  if (!(p.lon >= -180.0 && p.lon <= 180.0)) {
    throw ValidationError("GeoPoint: longitude " + std::to_string(p.lon) +
                          " outside [-180, 180]");
  }
}

void validate(const std::vector<GeoPoint>& points) {
  for (const auto& p : points) validate(p);
}

Matrix pairwise_distances(const std::vector<GeoPoint>& points) {
  const Index n = static_cast<Index>(points.size());
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double dij = euclid_distance(points[i], points[j]);
      d(i, j) = dij;
      d(j, i) = dij;
    }
  }
  return d;
}

Matrix pairwise_distances(const Matrix& features) {
  const Index n = features.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double dij = (features.row(i) - features.row(j)).norm();
      d(i, j) = dij;
      d(j, i) = dij;
    }
  }
  return d;
}

}  // namespace geoggnn
