#pragma once

#include <string>
#include <vector>

#include "geoggnn/geo.hpp"
#include "geoggnn/types.hpp"

namespace geoggnn {

/// How node-to-node influence is derived from distance.
struct KernelConfig {
  enum class Mode { threshold, gaussian };
  /// Which pairwise distance feeds the kernel. The geographic reading
  /// (coordinates) is the default; feature-space distance is an option.
  enum class DistanceSource { coordinates, features };

  Mode mode = Mode::threshold;
  double lambda = 0.5;  // threshold distance, degrees
  double phi = 0.5;     // Gaussian bandwidth, degrees
  DistanceSource distance_source = DistanceSource::coordinates;
  /// Gaussian weights below this are snapped to 0 (numerical hygiene only).
  double weight_floor = 1e-12;

  void validate() const;
};

/// Geographic graph in its three propagation-ready forms:
/// adj (A), adj_self (A + I) and norm = D^{-1/2} (A + I) D^{-1/2}.
struct WeightedGraph {
  Index n = 0;
  Matrix adj;
  Matrix adj_self;
  Matrix norm;
  Vector degrees;  // row sums of adj_self, always >= 1
  std::vector<std::string> warnings;
};

/// Binary adjacency: edge iff 0 < d(i,j) < lambda, strict. Symmetric, zero
/// diagonal. A graph with no edges at all is legal; build_graph surfaces a
/// warning for it.
Matrix build_threshold_adjacency(const std::vector<GeoPoint>& points,
                                 double lambda);

/// Gaussian kernel adjacency exp(-d^2 / (2 phi^2)) off the diagonal; the
/// diagonal stays 0 so self-connection is always added by add_self_loops.
Matrix build_gaussian_adjacency(const std::vector<GeoPoint>& points,
                                double phi, double weight_floor = 1e-12);

/// Same builders over a precomputed distance matrix (used for the
/// feature-space distance option).
Matrix threshold_adjacency_from_distances(const Matrix& dist, double lambda);
Matrix gaussian_adjacency_from_distances(const Matrix& dist, double phi,
                                         double weight_floor = 1e-12);

/// A + I. Rejects input whose diagonal is not all zero.
Matrix add_self_loops(const Matrix& adj);

/// D^{-1/2} A~ D^{-1/2} plus the degree vector D_i = sum_j A~_ij.
/// Requires a square symmetric nonnegative input with positive row sums.
std::pair<Matrix, Vector> sym_normalize(const Matrix& adj_self);

/// Full pipeline: mode-appropriate adjacency, self-loops, normalization.
WeightedGraph build_graph(const std::vector<GeoPoint>& points,
                          const KernelConfig& config);

/// Variant that can draw kernel distances from feature rows when
/// config.distance_source == features.
WeightedGraph build_graph(const std::vector<GeoPoint>& points,
                          const Matrix& features, const KernelConfig& config);

}  // namespace geoggnn
