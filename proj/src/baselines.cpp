#include "geoggnn/baselines.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "geoggnn/tensor.hpp"

namespace geoggnn {

void MlpConfig::validate() const {
  if (layer_dims.size() < 2) {
    throw ConfigError("MlpConfig: layer_dims needs at least [F+2, C]");
  }
  for (Index d : layer_dims) {
    if (d < 1) throw ConfigError("MlpConfig: layer dimensions must be >= 1");
  }
  if (!(learning_rate >= 0.0)) {
    throw ConfigError("MlpConfig: learning_rate must be >= 0");
  }
  if (max_epochs < 1) throw ConfigError("MlpConfig: max_epochs must be >= 1");
}

void CnnConfig::validate() const {
  if (kernel_size < 1 || kernel_size % 2 == 0) {
    throw ConfigError("CnnConfig: kernel_size must be odd and >= 1");
  }
  if (channels < 1) throw ConfigError("CnnConfig: channels must be >= 1");
  for (Index d : dense_dims) {
    if (d < 1) throw ConfigError("CnnConfig: dense dimensions must be >= 1");
  }
  if (!(learning_rate >= 0.0)) {
    throw ConfigError("CnnConfig: learning_rate must be >= 0");
  }
  if (max_epochs < 1) throw ConfigError("CnnConfig: max_epochs must be >= 1");
}

namespace {

Matrix glorot(Index fan_in, Index fan_out, double scale, Rng& rng) {
  const double s = scale * std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix w(fan_in, fan_out);
  for (Index i = 0; i < fan_in; ++i) {
    for (Index j = 0; j < fan_out; ++j) w(i, j) = rng.uniform(-s, s);
  }
  return w;
}

DenseStack init_stack(const std::vector<Index>& dims, double scale, Rng& rng) {
  DenseStack stack;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    stack.weights.push_back(glorot(dims[l], dims[l + 1], scale, rng));
    stack.biases.push_back(RowVector::Zero(dims[l + 1]));
  }
  return stack;
}

}  // namespace

MlpModel init_mlp(const MlpConfig& config, Rng& rng) {
  config.validate();
  MlpModel model;
  model.config = config;
  model.stack = init_stack(config.layer_dims, config.weight_init_scale, rng);
  return model;
}

CnnModel init_cnn(const CnnConfig& config, Index input_length, Index classes,
                  Rng& rng) {
  config.validate();
  if (config.kernel_size > input_length) {
    throw ConfigError("CnnConfig: kernel_size " +
                      std::to_string(config.kernel_size) +
                      " exceeds input length " + std::to_string(input_length));
  }
  if (classes < 2) throw ConfigError("init_cnn: need at least 2 classes");
  CnnModel model;
  model.config = config;
  model.input_length = input_length;
  model.classes = classes;
  model.conv_weights =
      glorot(config.channels, config.kernel_size, config.weight_init_scale, rng);
  model.conv_bias = Vector::Zero(config.channels);

  const Index conv_len = input_length - config.kernel_size + 1;
  std::vector<Index> dims;
  dims.push_back(config.channels * conv_len);
  dims.insert(dims.end(), config.dense_dims.begin(), config.dense_dims.end());
  dims.push_back(classes);
  model.stack = init_stack(dims, config.weight_init_scale, rng);
  return model;
}

DenseForward dense_forward(const DenseStack& stack, const Matrix& x) {
  DenseForward fwd;
  Matrix h = x;
  for (std::size_t l = 0; l < stack.weights.size(); ++l) {
    if (h.cols() != stack.weights[l].rows()) {
      throw std::invalid_argument("dense_forward: dimension mismatch at layer " +
                                  std::to_string(l));
    }
    fwd.inputs.push_back(h);
    Matrix z = (h * stack.weights[l]).rowwise() + stack.biases[l];
    if (l + 1 < stack.weights.size()) {
      h = relu(z);
    } else {
      fwd.probabilities = softmax_rows(z);
    }
    fwd.preact.push_back(std::move(z));
  }
  return fwd;
}

DenseGrads dense_backward(const DenseStack& stack, const DenseForward& fwd,
                          const Labels& labels) {
  const Index n = fwd.probabilities.rows();
  if (static_cast<std::size_t>(n) != labels.size()) {
    throw std::invalid_argument("dense_backward: label count mismatch");
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  Matrix delta = fwd.probabilities * inv_n;
  for (Index i = 0; i < n; ++i) {
    delta(i, labels[static_cast<std::size_t>(i)]) -= inv_n;
  }

  DenseGrads grads;
  grads.weights.resize(stack.weights.size());
  grads.biases.resize(stack.weights.size());
  for (std::size_t l = stack.weights.size(); l-- > 0;) {
    grads.weights[l] = fwd.inputs[l].transpose() * delta;
    grads.biases[l] = delta.colwise().sum();
    Matrix dh = delta * stack.weights[l].transpose();
    if (l > 0) {
      delta = dh.cwiseProduct(
          (fwd.preact[l - 1].array() > 0.0).cast<Scalar>().matrix());
    } else {
      grads.input = std::move(dh);
    }
  }
  return grads;
}

CnnForward cnn_forward(const CnnModel& model, const Matrix& x) {
  if (x.cols() != model.input_length) {
    throw std::invalid_argument("cnn_forward: input length mismatch");
  }
  const Index k = model.config.kernel_size;
  const Index channels = model.config.channels;
  const Index conv_len = model.input_length - k + 1;
  const Index n = x.rows();

  CnnForward fwd;
  fwd.flattened.resize(n, channels * conv_len);
  for (Index ch = 0; ch < channels; ++ch) {
    Matrix z = Matrix::Constant(n, conv_len, model.conv_bias(ch));
    for (Index j = 0; j < k; ++j) {
      z += model.conv_weights(ch, j) * x.middleCols(j, conv_len);
    }
    fwd.flattened.middleCols(ch * conv_len, conv_len) = relu(z);
    fwd.conv_preact.push_back(std::move(z));
  }
  fwd.dense = dense_forward(model.stack, fwd.flattened);
  fwd.probabilities = fwd.dense.probabilities;
  return fwd;
}

CnnGrads cnn_backward(const CnnModel& model, const Matrix& x,
                      const CnnForward& fwd, const Labels& labels) {
  CnnGrads grads;
  grads.dense = dense_backward(model.stack, fwd.dense, labels);
  const Matrix& delta = grads.dense.input;  // w.r.t. flattened activations

  const Index k = model.config.kernel_size;
  const Index channels = model.config.channels;
  const Index conv_len = model.input_length - k + 1;
  grads.conv_weights = Matrix::Zero(channels, k);
  grads.conv_bias = Vector::Zero(channels);
  for (Index ch = 0; ch < channels; ++ch) {
    Matrix dz = delta.middleCols(ch * conv_len, conv_len)
                    .cwiseProduct((fwd.conv_preact[static_cast<std::size_t>(ch)]
                                       .array() > 0.0)
                                      .cast<Scalar>()
                                      .matrix());
    for (Index j = 0; j < k; ++j) {
      grads.conv_weights(ch, j) =
          dz.cwiseProduct(x.middleCols(j, conv_len)).sum();
    }
    grads.conv_bias(ch) = dz.sum();
  }
  return grads;
}

namespace {

Matrix slice_rows(const Matrix& x, const Mask& mask) {
  Matrix out(static_cast<Index>(mask.size()), x.cols());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    out.row(static_cast<Index>(i)) = x.row(mask[i]);
  }
  return out;
}

Labels slice_labels(const Labels& labels, const Mask& mask) {
  Labels out(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    out[i] = labels.at(static_cast<std::size_t>(mask[i]));
  }
  return out;
}

Mask full_mask(Index n) {
  Mask m(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i;
  return m;
}

double label_accuracy(const Labels& predicted, const Labels& truth) {
  if (truth.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == truth[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

/// One training loop serves both baselines; Forward/Backward/Step close over
/// the model-specific pieces.
template <typename ForwardFn, typename BackwardStepFn>
TrainTrace run_epochs(Index max_epochs, const Matrix& x_train,
                      const Labels& y_train, const Matrix& x_val,
                      const Labels& y_val, ForwardFn forward_probs,
                      BackwardStepFn backward_step) {
  TrainTrace trace;
  const Mask train_all = full_mask(x_train.rows());
  for (Index epoch = 0; epoch < max_epochs; ++epoch) {
    Matrix probs = forward_probs(x_train);
    const double l = loss(probs, y_train, train_all);
    if (!std::isfinite(l)) {
      throw NumericalError("baseline train: non-finite loss at epoch " +
                           std::to_string(epoch));
    }
    trace.loss.push_back(l);
    trace.train_accuracy.push_back(label_accuracy(argmax_rows(probs), y_train));
    if (x_val.rows() > 0) {
      Matrix val_probs = forward_probs(x_val);
      trace.val_accuracy.push_back(
          label_accuracy(argmax_rows(val_probs), y_val));
    } else {
      trace.val_accuracy.push_back(0.0);
    }
    backward_step(x_train, y_train, trace.val_accuracy.back());
  }
  return trace;
}

}  // namespace

std::pair<MlpModel, TrainTrace> mlp_train(const Matrix& samples,
                                          const Labels& labels,
                                          const Mask& train_mask,
                                          const Mask& val_mask,
                                          const MlpConfig& config) {
  config.validate();
  if (train_mask.empty()) {
    throw std::invalid_argument("mlp_train: empty train mask");
  }
  Rng rng(config.seed);
  MlpModel model = init_mlp(config, rng);
  const Matrix x_train = slice_rows(samples, train_mask);
  const Labels y_train = slice_labels(labels, train_mask);
  const Matrix x_val = slice_rows(samples, val_mask);
  const Labels y_val = slice_labels(labels, val_mask);

  MlpModel best = model;
  double best_val = -1.0;
  const double lr = config.learning_rate;
  TrainTrace trace = run_epochs(
      config.max_epochs, x_train, y_train, x_val, y_val,
      [&](const Matrix& x) { return dense_forward(model.stack, x).probabilities; },
      [&](const Matrix& x, const Labels& y, double val_acc) {
        if (!val_mask.empty() && val_acc > best_val) {
          best_val = val_acc;
          best = model;
        }
        DenseForward fwd = dense_forward(model.stack, x);
        DenseGrads grads = dense_backward(model.stack, fwd, y);
        for (std::size_t l = 0; l < model.stack.weights.size(); ++l) {
          model.stack.weights[l] -= lr * grads.weights[l];
          model.stack.biases[l] -= lr * grads.biases[l];
        }
      });

  if (val_mask.empty()) return {std::move(model), std::move(trace)};
  Matrix val_probs = dense_forward(model.stack, x_val).probabilities;
  if (label_accuracy(argmax_rows(val_probs), y_val) > best_val) {
    best = model;
  }
  return {std::move(best), std::move(trace)};
}

std::pair<CnnModel, TrainTrace> cnn_train(const Matrix& samples,
                                          const Labels& labels,
                                          const Mask& train_mask,
                                          const Mask& val_mask,
                                          const CnnConfig& config,
                                          Index classes) {
  config.validate();
  if (train_mask.empty()) {
    throw std::invalid_argument("cnn_train: empty train mask");
  }
  Rng rng(config.seed);
  CnnModel model = init_cnn(config, samples.cols(), classes, rng);
  const Matrix x_train = slice_rows(samples, train_mask);
  const Labels y_train = slice_labels(labels, train_mask);
  const Matrix x_val = slice_rows(samples, val_mask);
  const Labels y_val = slice_labels(labels, val_mask);

  CnnModel best = model;
  double best_val = -1.0;
  const double lr = config.learning_rate;
  TrainTrace trace = run_epochs(
      config.max_epochs, x_train, y_train, x_val, y_val,
      [&](const Matrix& x) { return cnn_forward(model, x).probabilities; },
      [&](const Matrix& x, const Labels& y, double val_acc) {
        if (!val_mask.empty() && val_acc > best_val) {
          best_val = val_acc;
          best = model;
        }
        CnnForward fwd = cnn_forward(model, x);
        CnnGrads grads = cnn_backward(model, x, fwd, y);
        model.conv_weights -= lr * grads.conv_weights;
        model.conv_bias -= lr * grads.conv_bias;
        for (std::size_t l = 0; l < model.stack.weights.size(); ++l) {
          model.stack.weights[l] -= lr * grads.dense.weights[l];
          model.stack.biases[l] -= lr * grads.dense.biases[l];
        }
      });

  if (val_mask.empty()) return {std::move(model), std::move(trace)};
  Matrix val_probs = cnn_forward(model, x_val).probabilities;
  if (label_accuracy(argmax_rows(val_probs), y_val) > best_val) {
    best = model;
  }
  return {std::move(best), std::move(trace)};
}

std::pair<Labels, Matrix> baseline_predict(const MlpModel& model,
                                           const Matrix& samples) {
  Matrix probs = dense_forward(model.stack, samples).probabilities;
  Labels labels = argmax_rows(probs);
  return {std::move(labels), std::move(probs)};
}

std::pair<Labels, Matrix> baseline_predict(const CnnModel& model,
                                           const Matrix& samples) {
  Matrix probs = cnn_forward(model, samples).probabilities;
  Labels labels = argmax_rows(probs);
  return {std::move(labels), std::move(probs)};
}

namespace {

using json = nlohmann::ordered_json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) {
    throw ValidationError("model json: weight matrix must be a nonempty array");
  }
  const Index r = static_cast<Index>(rows.size());
  const Index c = static_cast<Index>(rows.at(0).size());
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    const json& row = rows.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(row.size()) != c) {
      throw ValidationError("model json: ragged weight matrix");
    }
    for (Index j = 0; j < c; ++j) {
      m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
    }
  }
  return m;
}

json stack_to_json(const DenseStack& stack) {
  json weights = json::array();
  json biases = json::array();
  for (const Matrix& w : stack.weights) weights.push_back(matrix_to_json(w));
  for (const RowVector& b : stack.biases) {
    json row = json::array();
    for (Index j = 0; j < b.cols(); ++j) row.push_back(b(j));
    biases.push_back(std::move(row));
  }
  return {{"weights", std::move(weights)}, {"biases", std::move(biases)}};
}

DenseStack stack_from_json(const json& doc) {
  DenseStack stack;
  for (const json& w : doc.at("weights")) {
    stack.weights.push_back(matrix_from_json(w));
  }
  for (const json& b : doc.at("biases")) {
    RowVector bias(static_cast<Index>(b.size()));
    for (Index j = 0; j < bias.cols(); ++j) {
      bias(j) = b.at(static_cast<std::size_t>(j)).get<double>();
    }
    stack.biases.push_back(std::move(bias));
  }
  if (stack.weights.size() != stack.biases.size()) {
    throw ValidationError("model json: weight/bias layer count mismatch");
  }
  for (std::size_t l = 0; l < stack.weights.size(); ++l) {
    if (stack.biases[l].cols() != stack.weights[l].cols()) {
      throw ValidationError("model json: bias width mismatch at layer " +
                            std::to_string(l));
    }
    if (l + 1 < stack.weights.size() &&
        stack.weights[l].cols() != stack.weights[l + 1].rows()) {
      throw ValidationError("model json: dense layers do not chain at layer " +
                            std::to_string(l));
    }
  }
  return stack;
}

}  // namespace

std::string mlp_model_to_json(const MlpModel& model) {
  json doc;
  doc["format_version"] = 1;
  doc["model_type"] = "nn";
  doc["config"] = {{"layer_dims", model.config.layer_dims},
                   {"learning_rate", model.config.learning_rate},
                   {"max_epochs", model.config.max_epochs},
                   {"seed", model.config.seed},
                   {"weight_init_scale", model.config.weight_init_scale}};
  doc["stack"] = stack_to_json(model.stack);
  return doc.dump(2) + "\n";
}

MlpModel mlp_model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("model json: parse failure: ") + e.what());
  }
  if (doc.value("format_version", 0) != 1) {
    throw ValidationError("model json: unsupported format_version");
  }
  if (doc.value("model_type", "") != "nn") {
    throw ValidationError("model json: model_type is not nn");
  }
  MlpModel model;
  const json& cfg = doc.at("config");
  model.config.layer_dims = cfg.at("layer_dims").get<std::vector<Index>>();
  model.config.learning_rate = cfg.at("learning_rate").get<double>();
  model.config.max_epochs = cfg.at("max_epochs").get<Index>();
  model.config.seed = cfg.at("seed").get<std::uint64_t>();
  model.config.weight_init_scale = cfg.at("weight_init_scale").get<double>();
  model.config.validate();
  model.stack = stack_from_json(doc.at("stack"));
  if (model.stack.weights.size() + 1 != model.config.layer_dims.size()) {
    throw ValidationError("model json: stack depth does not match layer_dims");
  }
  for (std::size_t l = 0; l < model.stack.weights.size(); ++l) {
    if (model.stack.weights[l].rows() != model.config.layer_dims[l] ||
        model.stack.weights[l].cols() != model.config.layer_dims[l + 1]) {
      throw ValidationError("model json: weight " + std::to_string(l) +
                            " does not chain with layer_dims");
    }
  }
  return model;
}

std::string cnn_model_to_json(const CnnModel& model) {
  json doc;
  doc["format_version"] = 1;
  doc["model_type"] = "cnn";
  doc["config"] = {{"kernel_size", model.config.kernel_size},
                   {"channels", model.config.channels},
                   {"dense_dims", model.config.dense_dims},
                   {"learning_rate", model.config.learning_rate},
                   {"max_epochs", model.config.max_epochs},
                   {"seed", model.config.seed},
                   {"weight_init_scale", model.config.weight_init_scale}};
  doc["input_length"] = model.input_length;
  doc["classes"] = model.classes;
  doc["conv_weights"] = matrix_to_json(model.conv_weights);
  json bias = json::array();
  for (Index i = 0; i < model.conv_bias.size(); ++i) {
    bias.push_back(model.conv_bias(i));
  }
  doc["conv_bias"] = std::move(bias);
  doc["stack"] = stack_to_json(model.stack);
  return doc.dump(2) + "\n";
}

CnnModel cnn_model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("model json: parse failure: ") + e.what());
  }
  if (doc.value("format_version", 0) != 1) {
    throw ValidationError("model json: unsupported format_version");
  }
  if (doc.value("model_type", "") != "cnn") {
    throw ValidationError("model json: model_type is not cnn");
  }
  CnnModel model;
  const json& cfg = doc.at("config");
  model.config.kernel_size = cfg.at("kernel_size").get<Index>();
  model.config.channels = cfg.at("channels").get<Index>();
  model.config.dense_dims = cfg.at("dense_dims").get<std::vector<Index>>();
  model.config.learning_rate = cfg.at("learning_rate").get<double>();
  model.config.max_epochs = cfg.at("max_epochs").get<Index>();
  model.config.seed = cfg.at("seed").get<std::uint64_t>();
  model.config.weight_init_scale = cfg.at("weight_init_scale").get<double>();
  model.config.validate();
  model.input_length = doc.at("input_length").get<Index>();
  model.classes = doc.at("classes").get<Index>();
  model.conv_weights = matrix_from_json(doc.at("conv_weights"));
  const json& bias = doc.at("conv_bias");
  model.conv_bias.resize(static_cast<Index>(bias.size()));
  for (Index i = 0; i < model.conv_bias.size(); ++i) {
    model.conv_bias(i) = bias.at(static_cast<std::size_t>(i)).get<double>();
  }
  model.stack = stack_from_json(doc.at("stack"));

  if (model.conv_weights.rows() != model.config.channels ||
      model.conv_weights.cols() != model.config.kernel_size) {
    throw ValidationError("model json: conv weight shape mismatch");
  }
  const Index conv_len = model.input_length - model.config.kernel_size + 1;
  if (conv_len < 1 || model.stack.weights.empty() ||
      model.stack.weights.front().rows() != model.config.channels * conv_len ||
      model.stack.weights.back().cols() != model.classes) {
    throw ValidationError("model json: cnn stack does not chain with conv output");
  }
  return model;
}

}  // namespace geoggnn
