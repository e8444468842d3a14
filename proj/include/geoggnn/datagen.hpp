#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geoggnn/geo.hpp"
#include "geoggnn/rng.hpp"
#include "geoggnn/types.hpp"

namespace geoggnn {

/// Synthesis parameters for the geo-tagged incident dataset.
struct GenConfig {
  struct Center {
    GeoPoint point;
    double weight = 1.0;
  };

  std::uint64_t seed = 42;
  Index n = 400;
  Index f = 6;
  int c = 4;
  std::vector<Center> centers;  // empty means default_centers()
  double cluster_std = 0.8;            // degrees around each center
  double label_field_bandwidth = 1.2;  // degrees, spatial label-score scale
  double feature_noise_std = 1.0;
  double train_fraction = 0.6;
  double val_fraction = 0.2;
  double test_fraction = 0.2;

  void validate() const;
  /// Approximate city centers across the Gulf region.
  static std::vector<Center> default_centers();
};

struct DatasetMeta {
  std::uint64_t seed = 0;
  std::string generator_version;
  std::vector<std::string> class_names;
};

struct SpatialDataset {
  Matrix features;  // N x F, raw (standardization happens at training time)
  std::vector<GeoPoint> coords;
  Labels labels;
  Mask train_mask;
  Mask val_mask;
  Mask test_mask;
  DatasetMeta meta;

  Index size() const { return static_cast<Index>(coords.size()); }
  int classes() const;
  /// Checks sizes, mask partition, coordinate ranges, label ranges and the
  /// +-10% class balance; throws ValidationError on the first violation.
  void validate() const;
};

/// Deterministic synthesis: mixture-of-cities coordinates, a smooth bump
/// field per class turned into balanced labels, a majority-of-neighbors
/// label pass, and features whose pointwise signal is weak but whose
/// neighborhood average is informative. Retries the label stage up to 10
/// times before giving up on the balance invariant.
SpatialDataset generate(const GenConfig& config, Rng& rng);

/// CSV with header id,lat,lon,f0..f{F-1},label,split; reals at 17
/// significant digits so load() round-trips bit-exactly.
void save(const SpatialDataset& dataset, const std::string& path);

/// Parses and validates; errors carry the offending 1-based line number.
/// When require_classes > 0, labels must lie in [0, require_classes).
SpatialDataset load(const std::string& path, int require_classes = 0);

/// Accuracy of a k-NN classifier on neighborhood-averaged features minus the
/// same classifier's accuracy on raw features, both scored on the test mask.
/// Positive values certify that spatial aggregation carries signal.
double relational_gap_probe(const SpatialDataset& dataset, int k);

}  // namespace geoggnn
