#include <algorithm>
#include <string>

#include "rftwin/detectors.hpp"
#include "rftwin/error.hpp"
#include "rftwin/parallel.hpp"

namespace rftwin {

namespace {

// Mean reachability distance from a point to its neighbours, floored so
// that heavy duplication cannot produce an infinite density.
double mean_reach_distance(const LofModel& model, const std::vector<Neighbor>& neighbors) {
  double sum = 0.0;
  for (const auto& nb : neighbors) sum += std::max(model.k_distance[nb.index], nb.distance);
  return std::max(sum / static_cast<double>(neighbors.size()), kLofDistanceFloor);
}

}  // namespace

LofModel lof_fit(const FeatureMatrix& train, std::size_t k, double threshold, unsigned threads,
                 KnnBackend backend) {
  const std::size_t n = train.rows();
  if (k == 0) throw Error(ErrorKind::InvalidConfig, "LOF needs k >= 1");
  if (k >= n) {
    throw Error(ErrorKind::KTooLarge,
                "k = " + std::to_string(k) + " must be smaller than the training size " + std::to_string(n));
  }
  LofModel model;
  model.k = k;
  model.threshold = threshold;
  model.index = std::make_shared<const KnnIndex>(train, backend);

  std::vector<std::vector<Neighbor>> neighbors(n);
  model.k_distance.resize(n);
  parallel_for(n, threads, [&](std::size_t i) {
    neighbors[i] = model.index->query(train.row(i), k, i);
    model.k_distance[i] = neighbors[i].back().distance;
  });
  model.lrd.resize(n);
  parallel_for(n, threads, [&](std::size_t i) { model.lrd[i] = 1.0 / mean_reach_distance(model, neighbors[i]); });
  return model;
}

double lof_score(const LofModel& model, std::span<const double> x) {
  const auto neighbors = model.index->query(x, model.k);
  const double lrd_x = 1.0 / mean_reach_distance(model, neighbors);
  double ratio_sum = 0.0;
  for (const auto& nb : neighbors) ratio_sum += model.lrd[nb.index];
  return ratio_sum / static_cast<double>(neighbors.size()) / lrd_x;
}

bool lof_predict(const LofModel& model, std::span<const double> x) { return lof_score(model, x) > model.threshold; }

}  // namespace rftwin
