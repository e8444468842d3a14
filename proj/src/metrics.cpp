#include "geoggnn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "geoggnn/tensor.hpp"

namespace geoggnn {

namespace {

void check_labels(const Labels& labels, int classes, const char* who) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= classes) {
      throw std::invalid_argument(std::string(who) + ": label " +
                                  std::to_string(labels[i]) +
                                  " out of range at index " +
                                  std::to_string(i));
    }
  }
}

/// Indices sorted by score descending; ties keep input order.
std::vector<std::size_t> descending_order(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  return order;
}

}  // namespace

std::vector<std::vector<std::int64_t>> confusion_matrix(const Labels& predicted,
                                                        const Labels& truth,
                                                        int classes) {
  if (predicted.empty() || predicted.size() != truth.size()) {
    throw std::invalid_argument(
        "confusion_matrix: inputs must be nonempty and of equal length");
  }
  check_labels(predicted, classes, "confusion_matrix");
  check_labels(truth, classes, "confusion_matrix");
  std::vector<std::vector<std::int64_t>> m(
      static_cast<std::size_t>(classes),
      std::vector<std::int64_t>(static_cast<std::size_t>(classes), 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    m[static_cast<std::size_t>(truth[i])]
     [static_cast<std::size_t>(predicted[i])] += 1;
  }
  return m;
}

double accuracy(const Labels& predicted, const Labels& truth) {
  if (predicted.empty() || predicted.size() != truth.size()) {
    throw std::invalid_argument(
        "accuracy: inputs must be nonempty and of equal length");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == truth[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

MacroPrf precision_recall_f1_macro(const Labels& predicted, const Labels& truth,
                                   int classes) {
  const auto confusion = confusion_matrix(predicted, truth, classes);
  MacroPrf out;
  for (int c = 0; c < classes; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    std::int64_t tp = confusion[cc][cc];
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    for (int o = 0; o < classes; ++o) {
      if (o == c) continue;
      fp += confusion[static_cast<std::size_t>(o)][cc];
      fn += confusion[cc][static_cast<std::size_t>(o)];
    }
    bool degenerate = false;
    double precision = 0.0;
    double recall = 0.0;
    if (tp + fp > 0) {
      precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    } else {
      degenerate = true;
    }
    if (tp + fn > 0) {
      recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    } else {
      degenerate = true;
    }
    double f1 = 0.0;
    if (precision + recall > 0.0) {
      f1 = 2.0 * precision * recall / (precision + recall);
    }
    if (degenerate) out.zero_division_classes.push_back(c);
    out.precision += precision;
    out.recall += recall;
    out.f1 += f1;
  }
  out.precision /= classes;
  out.recall /= classes;
  out.f1 /= classes;
  return out;
}

double log_loss(const Matrix& probabilities, const Labels& truth) {
  if (probabilities.rows() == 0 ||
      static_cast<std::size_t>(probabilities.rows()) != truth.size()) {
    throw std::invalid_argument(
        "log_loss: probability rows must match label count and be nonempty");
  }
  check_labels(truth, static_cast<int>(probabilities.cols()), "log_loss");
  for (Index i = 0; i < probabilities.rows(); ++i) {
    if (std::abs(probabilities.row(i).sum() - 1.0) > 1e-6) {
      throw std::invalid_argument("log_loss: row " + std::to_string(i) +
                                  " does not sum to 1");
    }
  }
  double total = 0.0;
  for (Index i = 0; i < probabilities.rows(); ++i) {
    total -= std::log(std::max(probabilities(i, truth[static_cast<std::size_t>(i)]),
                               1e-15));
  }
  return total / static_cast<double>(probabilities.rows());
}

RocCurve roc_curve_auc(const std::vector<double>& scores,
                       const std::vector<int>& positives) {
  if (scores.empty() || scores.size() != positives.size()) {
    throw std::invalid_argument(
        "roc_curve_auc: inputs must be nonempty and of equal length");
  }
  const auto total_pos =
      std::count_if(positives.begin(), positives.end(), [](int p) { return p != 0; });
  const auto total_neg = static_cast<std::int64_t>(positives.size()) - total_pos;
  if (total_pos == 0 || total_neg == 0) {
    throw std::invalid_argument(
        "roc_curve_auc: need at least one positive and one negative label");
  }

  const auto order = descending_order(scores);
  RocCurve out;
  out.points.emplace_back(0.0, 0.0);
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    // all samples tied at this score fall in one threshold step
    while (i < order.size() && scores[order[i]] == s) {
      if (positives[order[i]] != 0)
        ++tp;
      else
        ++fp;
      ++i;
    }
    out.points.emplace_back(static_cast<double>(fp) / total_neg,
                            static_cast<double>(tp) / total_pos);
  }
  for (std::size_t k = 1; k < out.points.size(); ++k) {
    out.auc += (out.points[k].first - out.points[k - 1].first) *
               (out.points[k].second + out.points[k - 1].second) * 0.5;
  }
  return out;
}

PrCurve pr_curve_auc(const std::vector<double>& scores,
                     const std::vector<int>& positives) {
  if (scores.empty() || scores.size() != positives.size()) {
    throw std::invalid_argument(
        "pr_curve_auc: inputs must be nonempty and of equal length");
  }
  const auto total_pos =
      std::count_if(positives.begin(), positives.end(), [](int p) { return p != 0; });
  if (total_pos == 0) {
    throw std::invalid_argument("pr_curve_auc: no positive labels");
  }

  const auto order = descending_order(scores);
  PrCurve out;
  std::int64_t tp = 0;
  std::int64_t predicted_pos = 0;
  double prev_recall = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      if (positives[order[i]] != 0) ++tp;
      ++predicted_pos;
      ++i;
    }
    const double recall = static_cast<double>(tp) / total_pos;
    const double precision =
        static_cast<double>(tp) / static_cast<double>(predicted_pos);
    if (out.points.empty()) {
      out.points.emplace_back(0.0, precision);  // recall-0 anchor
    }
    out.points.emplace_back(recall, precision);
    out.auc += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return out;
}

EvalReport evaluate(const Matrix& probabilities, const Labels& truth,
                    int classes) {
  if (probabilities.cols() != classes) {
    throw std::invalid_argument(
        "evaluate: probability columns must equal the class count");
  }
  EvalReport report;
  report.log_loss = log_loss(probabilities, truth);  // validates rows too
  const Labels predicted = argmax_rows(probabilities);
  report.confusion = confusion_matrix(predicted, truth, classes);
  report.accuracy = accuracy(predicted, truth);
  MacroPrf prf = precision_recall_f1_macro(predicted, truth, classes);
  report.precision_macro = prf.precision;
  report.recall_macro = prf.recall;
  report.f1_macro = prf.f1;
  report.zero_division_classes = std::move(prf.zero_division_classes);

  for (int c = 0; c < classes; ++c) {
    std::vector<double> scores(truth.size());
    std::vector<int> pos(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
      scores[i] = probabilities(static_cast<Index>(i), c);
      pos[i] = truth[i] == c ? 1 : 0;
    }
    RocCurve roc = roc_curve_auc(scores, pos);
    PrCurve pr = pr_curve_auc(scores, pos);
    ClassCurves curves;
    curves.auc_roc = roc.auc;
    curves.auc_pr = pr.auc;
    curves.roc_points = std::move(roc.points);
    curves.pr_points = std::move(pr.points);
    report.per_class.push_back(std::move(curves));
  }
  return report;
}

namespace {

double round6(double x) { return std::round(x * 1e6) / 1e6; }

nlohmann::ordered_json points_to_json(
    const std::vector<std::pair<double, double>>& pts) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [x, y] : pts) {
    arr.push_back({round6(x), round6(y)});
  }
  return arr;
}

std::string points_csv(const char* header,
                       const std::vector<std::pair<double, double>>& pts) {
  std::string out(header);
  out += "\n";
  char buf[64];
  for (const auto& [x, y] : pts) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", x, y);
    out += buf;
  }
  return out;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json doc;
  doc["accuracy"] = round6(report.accuracy);
  doc["f1_macro"] = round6(report.f1_macro);
  doc["precision_macro"] = round6(report.precision_macro);
  doc["recall_macro"] = round6(report.recall_macro);
  doc["log_loss"] = round6(report.log_loss);
  doc["zero_division_classes"] = report.zero_division_classes;
  doc["confusion"] = report.confusion;
  nlohmann::ordered_json per_class = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const ClassCurves& curves = report.per_class[c];
    nlohmann::ordered_json entry;
    entry["class"] = c;
    entry["auc_roc"] = round6(curves.auc_roc);
    entry["auc_pr"] = round6(curves.auc_pr);
    entry["roc_points"] = points_to_json(curves.roc_points);
    entry["pr_points"] = points_to_json(curves.pr_points);
    per_class.push_back(std::move(entry));
  }
  doc["per_class"] = std::move(per_class);
  return doc.dump(2) + "\n";
}

std::string roc_points_csv(const std::vector<std::pair<double, double>>& pts) {
  return points_csv("fpr,tpr", pts);
}

std::string pr_points_csv(const std::vector<std::pair<double, double>>& pts) {
  return points_csv("recall,precision", pts);
}

}  // namespace geoggnn
