#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "geoggnn/types.hpp"

namespace geoggnn {

/// One-vs-rest curves and areas for a single class.
struct ClassCurves {
  double auc_roc = 0.0;
  double auc_pr = 0.0;
  std::vector<std::pair<double, double>> roc_points;  // (fpr, tpr)
  std::vector<std::pair<double, double>> pr_points;   // (recall, precision)
};

struct EvalReport {
  double accuracy = 0.0;
  double f1_macro = 0.0;
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  double log_loss = 0.0;
  std::vector<std::vector<std::int64_t>> confusion;  // [true][predicted]
  std::vector<ClassCurves> per_class;
  /// Classes whose per-class precision or recall had a zero denominator and
  /// were counted as 0 in the macro averages.
  std::vector<int> zero_division_classes;
};

/// confusion[i][j] = number of samples with true class i predicted as j.
std::vector<std::vector<std::int64_t>> confusion_matrix(
    const Labels& predicted, const Labels& truth, int classes);

double accuracy(const Labels& predicted, const Labels& truth);

struct MacroPrf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<int> zero_division_classes;
};

/// Unweighted one-vs-rest macro averages. A class with a zero denominator
/// contributes 0 and is flagged.
MacroPrf precision_recall_f1_macro(const Labels& predicted, const Labels& truth,
                                   int classes);

/// Mean -log P(true class); rows must sum to 1 within 1e-6; log clamped at
/// 1e-15.
double log_loss(const Matrix& probabilities, const Labels& truth);

struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (fpr, tpr), from (0,0)
  double auc = 0.0;                               // trapezoid rule
};

struct PrCurve {
  std::vector<std::pair<double, double>> points;  // (recall, precision)
  double auc = 0.0;                               // step rule (right-continuous)
};

/// Threshold sweep over the distinct scores in descending order; samples with
/// equal scores move in one step. Requires at least one positive and one
/// negative label.
RocCurve roc_curve_auc(const std::vector<double>& scores,
                       const std::vector<int>& positives);

/// Descending-score sweep; the curve is anchored at recall 0 with the
/// precision of the highest-score threshold. Requires at least one positive.
PrCurve pr_curve_auc(const std::vector<double>& scores,
                     const std::vector<int>& positives);

/// Assembles the full metric battery. Per-class curves treat class c as
/// positive with the class-c probability column as the score.
EvalReport evaluate(const Matrix& probabilities, const Labels& truth,
                    int classes);

/// Stable JSON document: fixed field order, reals rounded to 6 decimals.
std::string report_to_json(const EvalReport& report);

/// One "x,y" row per curve point, headered.
std::string roc_points_csv(const std::vector<std::pair<double, double>>& pts);
std::string pr_points_csv(const std::vector<std::pair<double, double>>& pts);

}  // namespace geoggnn
