#include "geoggnn/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "geoggnn/tensor.hpp"

namespace geoggnn {

void GcnConfig::validate() const {
  if (layer_dims.size() < 2) {
    throw ConfigError("GcnConfig: layer_dims needs at least [F, C]");
  }
  for (Index d : layer_dims) {
    if (d < 1) throw ConfigError("GcnConfig: layer dimensions must be >= 1");
  }
  if (!(learning_rate >= 0.0)) {
    throw ConfigError("GcnConfig: learning_rate must be >= 0");
  }
  if (max_epochs < 1) throw ConfigError("GcnConfig: max_epochs must be >= 1");
  if (!(weight_init_scale >= 0.0)) {
    throw ConfigError("GcnConfig: weight_init_scale must be >= 0");
  }
}

GcnModel init_model(const GcnConfig& config, Rng& rng) {
  config.validate();
  GcnModel model;
  model.config = config;
  for (std::size_t l = 0; l + 1 < config.layer_dims.size(); ++l) {
    const Index fan_in = config.layer_dims[l];
    const Index fan_out = config.layer_dims[l + 1];
    const double s = config.weight_init_scale *
                     std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix w(fan_in, fan_out);
    for (Index i = 0; i < fan_in; ++i) {
      for (Index j = 0; j < fan_out; ++j) {
        w(i, j) = rng.uniform(-s, s);
      }
    }
    model.weights.push_back(std::move(w));
  }
  return model;
}

GcnForward forward(const GcnModel& model, const WeightedGraph& graph,
                   const Matrix& features) {
  if (features.rows() != graph.n) {
    throw std::invalid_argument("forward: feature rows must equal graph size");
  }
  if (features.cols() != model.config.layer_dims.front()) {
    throw std::invalid_argument(
        "forward: feature columns must equal the input layer dimension");
  }
  const std::size_t layers = model.weights.size();
  GcnForward fwd;
  fwd.hidden.reserve(layers);
  fwd.aggregated.reserve(layers);
  fwd.preact.reserve(layers);

  Matrix h = features;
  for (std::size_t l = 0; l < layers; ++l) {
    fwd.hidden.push_back(h);
    Matrix agg = matmul(graph.norm, h);
    Matrix z = matmul(agg, model.weights[l]);
    fwd.aggregated.push_back(std::move(agg));
    if (l + 1 < layers) {
      h = relu(z);
    } else {
      fwd.probabilities = softmax_rows(z);
    }
    fwd.preact.push_back(std::move(z));
  }
  return fwd;
}

double loss(const Matrix& probabilities, const Labels& labels,
            const Mask& mask) {
  if (mask.empty()) throw std::invalid_argument("loss: empty mask");
  const int classes = static_cast<int>(probabilities.cols());
  double total = 0.0;
  for (Index v : mask) {
    const int c = labels.at(static_cast<std::size_t>(v));
    if (c < 0 || c >= classes) {
      throw std::invalid_argument("loss: label out of range at node " +
                                  std::to_string(v));
    }
    total -= std::log(std::max(probabilities(v, c), 1e-15));
  }
  return total / static_cast<double>(mask.size());
}

std::vector<Matrix> backward(const GcnModel& model, const WeightedGraph& graph,
                             const GcnForward& fwd, const Labels& labels,
                             const Mask& mask) {
  if (mask.empty()) throw std::invalid_argument("backward: empty mask");
  const std::size_t layers = model.weights.size();
  const double inv_mask = 1.0 / static_cast<double>(mask.size());

  // Output delta (P - Y) / |mask| on masked rows, zero elsewhere.
  Matrix delta = Matrix::Zero(fwd.probabilities.rows(),
                              fwd.probabilities.cols());
  for (Index v : mask) {
    delta.row(v) = fwd.probabilities.row(v) * inv_mask;
    delta(v, labels.at(static_cast<std::size_t>(v))) -= inv_mask;
  }

  std::vector<Matrix> grads(layers);
  for (std::size_t l = layers; l-- > 0;) {
    grads[l] = fwd.aggregated[l].transpose() * delta;
    if (l > 0) {
      Matrix dh = graph.norm.transpose() *
                  (delta * model.weights[l].transpose());
      // ReLU gate from the previous layer's pre-activation.
      delta = dh.cwiseProduct(
          (fwd.preact[l - 1].array() > 0.0).cast<Scalar>().matrix());
    }
  }
  return grads;
}

std::vector<Matrix> backward(const GcnModel& model, const WeightedGraph& graph,
                             const Matrix& features, const Labels& labels,
                             const Mask& mask) {
  return backward(model, graph, forward(model, graph, features), labels, mask);
}

namespace {

double mask_accuracy(const Matrix& probabilities, const Labels& labels,
                     const Mask& mask) {
  if (mask.empty()) return 0.0;
  Index correct = 0;
  for (Index v : mask) {
    Index best = 0;
    for (Index c = 1; c < probabilities.cols(); ++c) {
      if (probabilities(v, c) > probabilities(v, best)) best = c;
    }
    if (best == labels.at(static_cast<std::size_t>(v))) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(mask.size());
}

}  // namespace

std::pair<GcnModel, TrainTrace> train(const GcnModel& initial,
                                      const WeightedGraph& graph,
                                      const Matrix& features,
                                      const Labels& labels,
                                      const Mask& train_mask,
                                      const Mask& val_mask) {
  if (train_mask.empty()) {
    throw std::invalid_argument("train: empty train mask");
  }
  GcnModel model = initial;
  TrainTrace trace;
  GcnModel best = model;
  double best_val = -1.0;
  const double lr = model.config.learning_rate;

  for (Index epoch = 0; epoch < model.config.max_epochs; ++epoch) {
    GcnForward fwd = forward(model, graph, features);
    const double l = loss(fwd.probabilities, labels, train_mask);
    if (!std::isfinite(l)) {
      throw NumericalError("train: non-finite loss at epoch " +
                           std::to_string(epoch));
    }
    trace.loss.push_back(l);
    trace.train_accuracy.push_back(
        mask_accuracy(fwd.probabilities, labels, train_mask));
    const double val_acc =
        mask_accuracy(fwd.probabilities, labels, val_mask);
    trace.val_accuracy.push_back(val_acc);
    if (!val_mask.empty() && val_acc > best_val) {
      best_val = val_acc;
      best = model;
    }

    std::vector<Matrix> grads = backward(model, graph, fwd, labels, train_mask);
    for (std::size_t i = 0; i < grads.size(); ++i) {
      model.weights[i] -= lr * grads[i];
    }
  }

  if (val_mask.empty()) return {std::move(model), std::move(trace)};

  // The final update never appeared in the trace; let it compete too.
  GcnForward fwd = forward(model, graph, features);
  if (mask_accuracy(fwd.probabilities, labels, val_mask) > best_val) {
    best = model;
  }
  return {std::move(best), std::move(trace)};
}

std::pair<Labels, Matrix> predict(const GcnModel& model,
                                  const WeightedGraph& graph,
                                  const Matrix& features) {
  Matrix probs = forward(model, graph, features).probabilities;
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

}  // namespace

std::string gcn_model_to_json(const GcnModel& model) {
  json doc;
  doc["format_version"] = 1;
  doc["model_type"] = "geoggnn";
  doc["config"] = {{"layer_dims", model.config.layer_dims},
                   {"learning_rate", model.config.learning_rate},
                   {"max_epochs", model.config.max_epochs},
                   {"seed", model.config.seed},
                   {"weight_init_scale", model.config.weight_init_scale}};
  json weights = json::array();
  for (const Matrix& w : model.weights) weights.push_back(matrix_to_json(w));
  doc["weights"] = std::move(weights);
  return doc.dump(2) + "\n";
}

GcnModel gcn_model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("model json: parse failure: ") +
                          e.what());
  }
  if (doc.value("format_version", 0) != 1) {
    throw ValidationError("model json: unsupported format_version");
  }
  if (doc.value("model_type", "") != "geoggnn") {
    throw ValidationError("model json: model_type is not geoggnn");
  }
  GcnModel model;
  const json& cfg = doc.at("config");
  model.config.layer_dims = cfg.at("layer_dims").get<std::vector<Index>>();
  model.config.learning_rate = cfg.at("learning_rate").get<double>();
  model.config.max_epochs = cfg.at("max_epochs").get<Index>();
  model.config.seed = cfg.at("seed").get<std::uint64_t>();
  model.config.weight_init_scale = cfg.at("weight_init_scale").get<double>();
  model.config.validate();

  for (const json& w : doc.at("weights")) {
    model.weights.push_back(matrix_from_json(w));
  }
  if (model.weights.size() + 1 != model.config.layer_dims.size()) {
    throw ValidationError("model json: weight count does not match layer_dims");
  }
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    if (model.weights[l].rows() != model.config.layer_dims[l] ||
        model.weights[l].cols() != model.config.layer_dims[l + 1]) {
      throw ValidationError("model json: weight " + std::to_string(l) +
                            " does not chain with layer_dims");
    }
    if (!all_finite(model.weights[l])) {
      throw ValidationError("model json: weight " + std::to_string(l) +
                            " has non-finite entries");
    }
  }
  return model;
}

void save_gcn_model(const GcnModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << gcn_model_to_json(model);
}

GcnModel load_gcn_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open for reading: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return gcn_model_from_json(text);
}

}  // namespace geoggnn
