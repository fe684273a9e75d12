#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rftwin/dataset.hpp"

namespace rftwin {

/// Anomaly is the positive class.
struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

Confusion confusion(std::span<const Label> labels, std::span<const Label> predictions);

/// A rate together with a flag raised when its denominator was zero (the
/// value is then 0 by convention).
struct Rate {
  double value = 0.0;
  bool undefined = false;
};

struct PrecisionRecall {
  Rate precision;
  Rate recall;
};

PrecisionRecall precision_recall(const Confusion& c) noexcept;
Rate true_positive_rate(const Confusion& c) noexcept;
Rate false_positive_rate(const Confusion& c) noexcept;

/// Weighted harmonic mean of precision and recall; 0 when both are 0.
double f_beta(double precision, double recall, double beta = 2.0);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // +inf for the (0, 0) anchor
};

/// Threshold sweep over the distinct scores, predicting anomaly for
/// score >= threshold; starts at (0, 0) and ends at (1, 1).
struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

RocCurve roc_curve(std::span<const Label> labels, std::span<const double> scores);
/// Trapezoidal area under the curve.
double auc(const RocCurve& curve) noexcept;

/// Keeps at most `max_points` points (always the first and last).
RocCurve thin_roc(const RocCurve& curve, std::size_t max_points);

struct MetricsReport {
  Confusion confusion;
  double precision = 0.0;
  double recall = 0.0;
  double f2 = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
  double auc = 0.0;
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool fpr_undefined = false;
  bool auc_undefined = false;  // single-class label set; roc left empty
  RocCurve roc;
};

/// Operating-point metrics from `predictions` plus the ROC from `scores`.
MetricsReport evaluate_metrics(std::span<const Label> labels, std::span<const double> scores,
                               std::span<const Label> predictions);

}  // namespace rftwin
