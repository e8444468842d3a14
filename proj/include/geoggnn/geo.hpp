#pragma once

#include <cmath>
#include <vector>

#include "geoggnn/types.hpp"

namespace geoggnn {

/// A location in decimal degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

/// Throws ValidationError unless lat in [-90, 90] and lon in [-180, 180].
void validate(const GeoPoint& p);
void validate(const std::vector<GeoPoint>& points);

/// Planar Euclidean distance on raw degree coordinates,
/// sqrt((lat_i - lat_j)^2 + (lon_i - lon_j)^2). Deliberately not haversine.
inline double euclid_distance(const GeoPoint& p, const GeoPoint& q) {
  const double dlat = p.lat - q.lat;
  const double dlon = p.lon - q.lon;
  return std::sqrt(dlat * dlat + dlon * dlon);
}

/// Symmetric pairwise distance matrix with zero diagonal.
Matrix pairwise_distances(const std::vector<GeoPoint>& points);

/// Pairwise Euclidean distances between feature rows (the feature-space
/// reading of the kernel distance; off by default in graph building).
Matrix pairwise_distances(const Matrix& features);

}  // namespace geoggnn
