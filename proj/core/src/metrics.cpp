#include "rftwin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rftwin/error.hpp"

namespace rftwin {

namespace {

Rate ratio(std::size_t num, std::size_t den) noexcept {
  if (den == 0) return {0.0, true};
  return {static_cast<double>(num) / static_cast<double>(den), false};
}

}  // namespace

Confusion confusion(std::span<const Label> labels, std::span<const Label> predictions) {
  if (labels.size() != predictions.size()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(labels.size()) + " labels vs " +
                                               std::to_string(predictions.size()) + " predictions");
  }
  if (labels.empty()) throw Error(ErrorKind::LengthMismatch, "confusion of an empty label set");
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool actual = labels[i] == Label::Anomaly;
    const bool predicted = predictions[i] == Label::Anomaly;
    if (actual && predicted) ++c.tp;
    else if (actual) ++c.fn;
    else if (predicted) ++c.fp;
    else ++c.tn;
  }
  return c;
}

PrecisionRecall precision_recall(const Confusion& c) noexcept {
  return {ratio(c.tp, c.tp + c.fp), ratio(c.tp, c.tp + c.fn)};
}

Rate true_positive_rate(const Confusion& c) noexcept { return ratio(c.tp, c.tp + c.fn); }

Rate false_positive_rate(const Confusion& c) noexcept { return ratio(c.fp, c.tn + c.fp); }

double f_beta(double precision, double recall, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorKind::InvalidConfig, "beta must be > 0");
  const double b2 = beta * beta;
  const double den = b2 * precision + recall;
  if (den == 0.0) return 0.0;
  return (1.0 + b2) * precision * recall / den;
}

RocCurve roc_curve(std::span<const Label> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) {
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(labels.size()) + " labels vs " + std::to_string(scores.size()) + " scores");
  }
  const auto positives = static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), Label::Anomaly));
  const std::size_t negatives = labels.size() - positives;
  if (std::any_of(scores.begin(), scores.end(), [](double s) { return std::isnan(s); })) {
    throw Error(ErrorKind::Domain, "ROC scores must not be NaN");
  }
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorKind::SingleClass, "ROC needs at least one positive and one negative sample");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double threshold = scores[order[k]];
    // Tied scores share one threshold.
    while (k < order.size() && scores[order[k]] == threshold) {
      if (labels[order[k]] == Label::Anomaly) ++tp;
      else ++fp;
      ++k;
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives), threshold});
  }
  if (curve.points.back().fpr != 1.0 || curve.points.back().tpr != 1.0) {
    curve.points.push_back({1.0, 1.0, -std::numeric_limits<double>::infinity()});
  }
  curve.auc = auc(curve);
  return curve;
}

double auc(const RocCurve& curve) noexcept {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return area;
}

RocCurve thin_roc(const RocCurve& curve, std::size_t max_points) {
  if (curve.points.size() <= max_points || max_points < 2) return curve;
  RocCurve out;
  out.auc = curve.auc;
  const std::size_t n = curve.points.size();
  for (std::size_t k = 0; k < max_points; ++k) {
    const std::size_t idx = k * (n - 1) / (max_points - 1);
    out.points.push_back(curve.points[idx]);
  }
  return out;
}

MetricsReport evaluate_metrics(std::span<const Label> labels, std::span<const double> scores,
                               std::span<const Label> predictions) {
  MetricsReport r;
  r.confusion = confusion(labels, predictions);
  const auto pr = precision_recall(r.confusion);
  r.precision = pr.precision.value;
  r.recall = pr.recall.value;
  r.precision_undefined = pr.precision.undefined;
  r.recall_undefined = pr.recall.undefined;
  r.f2 = f_beta(r.precision, r.recall, 2.0);
  r.tpr = pr.recall.value;
  const auto fpr = false_positive_rate(r.confusion);
  r.fpr = fpr.value;
  r.fpr_undefined = fpr.undefined;
  const bool both_classes = r.confusion.tp + r.confusion.fn > 0 && r.confusion.tn + r.confusion.fp > 0;
  if (both_classes) {
    r.roc = roc_curve(labels, scores);
    r.auc = r.roc.auc;
  } else {
    r.auc_undefined = true;
  }
  return r;
}

}  // namespace rftwin
