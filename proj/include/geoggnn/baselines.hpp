#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "geoggnn/gcn.hpp"
#include "geoggnn/rng.hpp"
#include "geoggnn/types.hpp"

namespace geoggnn {

/// Fully connected baseline. Consumes coordinates as two extra feature
/// columns, so layer_dims starts at F + 2.
struct MlpConfig {
  std::vector<Index> layer_dims;  // [F+2, hidden..., C]
  double learning_rate = 0.05;
  Index max_epochs = 2000;
  std::uint64_t seed = 42;
  double weight_init_scale = 1.0;

  void validate() const;
};

/// 1-D convolutional baseline over the length-(F+2) feature signal.
struct CnnConfig {
  Index kernel_size = 3;          // odd, <= input length
  Index channels = 8;
  std::vector<Index> dense_dims;  // hidden dims between flatten and output
  double learning_rate = 0.05;
  Index max_epochs = 2000;
  std::uint64_t seed = 42;
  double weight_init_scale = 1.0;

  void validate() const;
};

/// ReLU dense layers with biases; the last layer is linear + softmax.
struct DenseStack {
  std::vector<Matrix> weights;
  std::vector<RowVector> biases;
};

struct DenseForward {
  Matrix probabilities;
  std::vector<Matrix> inputs;  // input to each layer
  std::vector<Matrix> preact;  // X W + b per layer
};

struct DenseGrads {
  std::vector<Matrix> weights;
  std::vector<RowVector> biases;
  Matrix input;  // gradient w.r.t. the stack input (feeds the conv layer)
};

struct MlpModel {
  DenseStack stack;
  MlpConfig config;
};

struct CnnModel {
  Matrix conv_weights;  // channels x kernel_size, single input channel
  Vector conv_bias;     // per channel
  DenseStack stack;     // [channels * (L - k + 1), dense_dims..., C]
  CnnConfig config;
  Index input_length = 0;
  Index classes = 0;
};

struct CnnForward {
  Matrix probabilities;
  std::vector<Matrix> conv_preact;  // per channel, N x (L - k + 1)
  Matrix flattened;                 // N x channels*(L - k + 1), post-ReLU
  DenseForward dense;
};

struct CnnGrads {
  Matrix conv_weights;
  Vector conv_bias;
  DenseGrads dense;
};

MlpModel init_mlp(const MlpConfig& config, Rng& rng);
CnnModel init_cnn(const CnnConfig& config, Index input_length, Index classes,
                  Rng& rng);

DenseForward dense_forward(const DenseStack& stack, const Matrix& x);
/// Gradients of mean cross-entropy over all given rows.
DenseGrads dense_backward(const DenseStack& stack, const DenseForward& fwd,
                          const Labels& labels);

CnnForward cnn_forward(const CnnModel& model, const Matrix& x);
CnnGrads cnn_backward(const CnnModel& model, const Matrix& x,
                      const CnnForward& fwd, const Labels& labels);

/// Full-batch gradient descent over the train rows; same trace and
/// checkpointing semantics as geoggnn's train.
std::pair<MlpModel, TrainTrace> mlp_train(const Matrix& samples,
                                          const Labels& labels,
                                          const Mask& train_mask,
                                          const Mask& val_mask,
                                          const MlpConfig& config);

std::pair<CnnModel, TrainTrace> cnn_train(const Matrix& samples,
                                          const Labels& labels,
                                          const Mask& train_mask,
                                          const Mask& val_mask,
                                          const CnnConfig& config, Index classes);

std::pair<Labels, Matrix> baseline_predict(const MlpModel& model,
                                           const Matrix& samples);
std::pair<Labels, Matrix> baseline_predict(const CnnModel& model,
                                           const Matrix& samples);

/// Same versioned JSON family as the geoggnn model.
std::string mlp_model_to_json(const MlpModel& model);
MlpModel mlp_model_from_json(const std::string& text);
std::string cnn_model_to_json(const CnnModel& model);
CnnModel cnn_model_from_json(const std::string& text);

}  // namespace geoggnn
