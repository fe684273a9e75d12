#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "rftwin/detectors.hpp"
#include "rftwin/error.hpp"

namespace rftwin {

namespace {

// Summed in descending order so the result is bit-identical under any
// permutation of the features.
double mean_of(std::span<const double> x) {
  if (x.empty()) return 0.0;
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
}

}  // namespace

double nearest_rank_percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorKind::EmptyTrainingSet, "percentile of an empty set");
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidConfig, "percentile must lie in (0, 1]");
  const auto n = values.size();
  // The small slack keeps products like 0.9 * 10 from rounding up a rank.
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1), values.end());
  return values[rank - 1];
}

AedModel aed_fit(const FeatureMatrix& train, double percentile) {
  if (train.rows() == 0) throw Error(ErrorKind::EmptyTrainingSet, "AED needs at least one training sample");
  std::vector<double> means(train.rows());
  for (std::size_t i = 0; i < train.rows(); ++i) means[i] = mean_of(train.row(i));
  AedModel model;
  model.percentile = percentile;
  model.n_features = train.cols();
  model.threshold = nearest_rank_percentile(std::move(means), percentile);
  return model;
}

double aed_score(const AedModel& model, std::span<const double> x) {
  if (x.size() != model.n_features) {
    throw Error(ErrorKind::DimensionMismatch, "AED expects " + std::to_string(model.n_features) + " features, got " +
                                                  std::to_string(x.size()));
  }
  return mean_of(x);
}

bool aed_predict(const AedModel& model, std::span<const double> x) { return aed_score(model, x) >= model.threshold; }

}  // namespace rftwin
