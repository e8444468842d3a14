#include "geoggnn/graph.hpp"

#include <cmath>
#include <utility>

namespace geoggnn {

void KernelConfig::validate() const {
  if (mode == Mode::threshold && !(lambda > 0.0)) {
    throw ConfigError("KernelConfig: threshold mode needs lambda > 0");
  }
  if (mode == Mode::gaussian && !(phi > 0.0)) {
    throw ConfigError("KernelConfig: gaussian mode needs phi > 0");
  }
  if (weight_floor < 0.0) {
    throw ConfigError("KernelConfig: weight_floor must be >= 0");
  }
}

Matrix threshold_adjacency_from_distances(const Matrix& dist, double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("threshold adjacency: lambda must be > 0");
  }
  const Index n = dist.rows();
  Matrix adj = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (dist(i, j) < lambda) {  // strict, so d == lambda is not an edge
        adj(i, j) = 1.0;
        adj(j, i) = 1.0;
      }
    }
  }
  return adj;
}

Matrix gaussian_adjacency_from_distances(const Matrix& dist, double phi,
                                         double weight_floor) {
  if (!(phi > 0.0)) {
    throw std::invalid_argument("gaussian adjacency: phi must be > 0");
  }
  const Index n = dist.rows();
  Matrix adj = Matrix::Zero(n, n);
  const double inv = 1.0 / (2.0 * phi * phi);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      double w = std::exp(-dist(i, j) * dist(i, j) * inv);
      if (w < weight_floor) w = 0.0;
      adj(i, j) = w;
      adj(j, i) = w;
    }
  }
  return adj;
}

Matrix build_threshold_adjacency(const std::vector<GeoPoint>& points,
                                 double lambda) {
  if (points.size() < 2) {
    throw std::invalid_argument("threshold adjacency: need at least 2 points");
  }
  validate(points);
  return threshold_adjacency_from_distances(pairwise_distances(points), lambda);
}

Matrix build_gaussian_adjacency(const std::vector<GeoPoint>& points, double phi,
                                double weight_floor) {
  if (points.size() < 2) {
    throw std::invalid_argument("gaussian adjacency: need at least 2 points");
  }
  validate(points);
  return gaussian_adjacency_from_distances(pairwise_distances(points), phi,
                                           weight_floor);
}

Matrix add_self_loops(const Matrix& adj) {
  if (adj.rows() != adj.cols()) {
    throw std::invalid_argument("add_self_loops: matrix must be square");
  }
  for (Index i = 0; i < adj.rows(); ++i) {
    if (adj(i, i) != 0.0) {
      throw std::invalid_argument(
          "add_self_loops: diagonal entry " + std::to_string(i) +
          " is nonzero; refusing to double a self-loop");
    }
  }
  return adj + Matrix::Identity(adj.rows(), adj.cols());
}

std::pair<Matrix, Vector> sym_normalize(const Matrix& adj_self) {
  const Index n = adj_self.rows();
  if (n != adj_self.cols()) {
    throw std::invalid_argument("sym_normalize: matrix must be square");
  }
  if ((adj_self.array() < 0.0).any()) {
    throw std::invalid_argument("sym_normalize: negative entries");
  }
  if (adj_self != adj_self.transpose()) {
    throw std::invalid_argument("sym_normalize: matrix must be symmetric");
  }
  Vector degrees = adj_self.rowwise().sum();
  for (Index i = 0; i < n; ++i) {
    if (!(degrees(i) > 0.0)) {
      throw std::invalid_argument(
          "sym_normalize: node " + std::to_string(i) +
          " has zero degree; add self-loops before normalizing");
    }
  }
  Vector inv_sqrt = degrees.array().rsqrt();
  Matrix norm = inv_sqrt.asDiagonal() * adj_self * inv_sqrt.asDiagonal();
  return {std::move(norm), std::move(degrees)};
}

namespace {

WeightedGraph assemble(Matrix adj) {
  WeightedGraph g;
  g.n = adj.rows();
  g.adj = std::move(adj);
  if ((g.adj.array() == 0.0).all()) {
    g.warnings.push_back(
        "graph has no edges; every node is isolated (self-loops only)");
  }
  g.adj_self = add_self_loops(g.adj);
  auto [norm, degrees] = sym_normalize(g.adj_self);
  g.norm = std::move(norm);
  g.degrees = std::move(degrees);
  return g;
}

}  // namespace

WeightedGraph build_graph(const std::vector<GeoPoint>& points,
                          const KernelConfig& config) {
  if (config.distance_source == KernelConfig::DistanceSource::features) {
    throw ConfigError(
        "build_graph: feature distance source requires the overload that "
        "takes a feature matrix");
  }
  return build_graph(points, Matrix(), config);
}

WeightedGraph build_graph(const std::vector<GeoPoint>& points,
                          const Matrix& features, const KernelConfig& config) {
  config.validate();
  if (points.empty()) {
    throw std::invalid_argument("build_graph: need at least 1 point");
  }
  validate(points);

  const Index n = static_cast<Index>(points.size());
  Matrix dist;
  if (config.distance_source == KernelConfig::DistanceSource::features) {
    if (features.rows() != n) {
      throw std::invalid_argument(
          "build_graph: feature rows must match point count");
    }
    dist = pairwise_distances(features);
  } else {
    dist = pairwise_distances(points);
  }

  Matrix adj;
  if (n == 1) {
    adj = Matrix::Zero(1, 1);  // degenerate graph: self-loop only
  } else if (config.mode == KernelConfig::Mode::threshold) {
    adj = threshold_adjacency_from_distances(dist, config.lambda);
  } else {
    adj = gaussian_adjacency_from_distances(dist, config.phi,
                                            config.weight_floor);
  }
  return assemble(std::move(adj));
}

}  // namespace geoggnn
