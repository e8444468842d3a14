#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "geoggnn/graph.hpp"
#include "geoggnn/rng.hpp"
#include "geoggnn/types.hpp"

namespace geoggnn {

struct GcnConfig {
  /// [F, hidden..., C]; at least two entries, last is the class count.
  std::vector<Index> layer_dims;
  double learning_rate = 0.05;
  Index max_epochs = 2000;
  std::uint64_t seed = 42;
  double weight_init_scale = 1.0;

  void validate() const;
};

/// Per-layer weight matrices W_l of shape layer_dims[l] x layer_dims[l+1].
/// No biases, matching the propagation rule the model implements.
struct GcnModel {
  std::vector<Matrix> weights;
  GcnConfig config;
};

struct TrainTrace {
  std::vector<double> loss;            // cross-entropy on the train mask
  std::vector<double> train_accuracy;  // one entry per completed epoch
  std::vector<double> val_accuracy;    // 0 when the validation mask is empty
};

/// Everything the backward pass needs from one forward evaluation.
struct GcnForward {
  Matrix probabilities;            // N x C, rows sum to 1
  std::vector<Matrix> hidden;      // H_0..H_{L-1}, inputs to each layer
  std::vector<Matrix> aggregated;  // norm * H_l
  std::vector<Matrix> preact;      // (norm * H_l) * W_l
};

/// Glorot-style uniform init: entries i.i.d. on [-s, s] with
/// s = weight_init_scale * sqrt(6 / (fan_in + fan_out)). Entries are drawn
/// row-major, layer by layer, so a seed pins the model exactly.
GcnModel init_model(const GcnConfig& config, Rng& rng);

/// Layer rule H_{l+1} = ReLU(norm H_l W_l); the final layer applies softmax
/// with no ReLU.
GcnForward forward(const GcnModel& model, const WeightedGraph& graph,
                   const Matrix& features);

/// Mean negative log-probability of the true class over the masked nodes,
/// with the log argument clamped at 1e-15.
double loss(const Matrix& probabilities, const Labels& labels,
            const Mask& mask);

/// Analytic gradients of loss() w.r.t. every weight matrix.
std::vector<Matrix> backward(const GcnModel& model, const WeightedGraph& graph,
                             const Matrix& features, const Labels& labels,
                             const Mask& mask);

/// Same, reusing an existing forward evaluation.
std::vector<Matrix> backward(const GcnModel& model, const WeightedGraph& graph,
                             const GcnForward& fwd, const Labels& labels,
                             const Mask& mask);

/// Full-batch gradient descent for config.max_epochs epochs. Each epoch
/// records the pre-update loss and accuracies. Returns the weights with the
/// best validation accuracy seen (the final weights when val_mask is empty),
/// plus the trace. Throws NumericalError if the loss leaves the reals.
std::pair<GcnModel, TrainTrace> train(const GcnModel& initial,
                                      const WeightedGraph& graph,
                                      const Matrix& features,
                                      const Labels& labels,
                                      const Mask& train_mask,
                                      const Mask& val_mask);

/// Argmax class per node; ties resolve to the lowest class index.
std::pair<Labels, Matrix> predict(const GcnModel& model,
                                  const WeightedGraph& graph,
                                  const Matrix& features);

/// Versioned JSON round-trip. The loader re-validates dimension chaining.
std::string gcn_model_to_json(const GcnModel& model);
GcnModel gcn_model_from_json(const std::string& text);
void save_gcn_model(const GcnModel& model, const std::string& path);
GcnModel load_gcn_model(const std::string& path);

}  // namespace geoggnn
