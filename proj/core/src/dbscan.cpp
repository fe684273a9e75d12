#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rftwin/detectors.hpp"
#include "rftwin/error.hpp"
#include "rftwin/parallel.hpp"

namespace rftwin {

DbscanModel dbscan_fit(const FeatureMatrix& train, const DbscanOptions& options, unsigned threads,
                       KnnBackend backend) {
  const std::size_t n = train.rows();
  const std::size_t min_pts = options.min_pts;
  if (min_pts == 0) throw Error(ErrorKind::InvalidConfig, "min_pts must be >= 1");
  if (n <= min_pts) {
    throw Error(ErrorKind::KTooLarge, "DBSCAN needs more than min_pts = " + std::to_string(min_pts) +
                                          " training samples, got " + std::to_string(n));
  }
  const KnnIndex index(train, backend);
  std::vector<double> k_dist(n);
  parallel_for(n, threads, [&](std::size_t i) { k_dist[i] = index.query(train.row(i), min_pts, i).back().distance; });

  DbscanModel model;
  model.min_pts = min_pts;
  model.eps_mode = options.eps_mode;
  model.eps_percentile = options.eps_percentile;
  if (options.eps_mode == EpsMode::Fixed) {
    if (!(options.eps > 0.0) || !std::isfinite(options.eps)) throw Error(ErrorKind::InvalidConfig, "eps must be > 0");
    model.eps = options.eps;
  } else {
    model.eps = std::max(nearest_rank_percentile(k_dist, options.eps_percentile), kDbscanEpsFloor);
  }

  // At least min_pts others within eps <=> the min_pts-th nearest other
  // point is within eps.
  std::vector<double> core;
  std::size_t n_core = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (k_dist[i] <= model.eps) {
      const auto row = train.row(i);
      core.insert(core.end(), row.begin(), row.end());
      ++n_core;
    }
  }
  model.core = std::make_shared<const KnnIndex>(FeatureMatrix(n_core, train.cols(), std::move(core)), backend);
  return model;
}

double dbscan_score(const DbscanModel& model, std::span<const double> x) {
  if (model.core->size() == 0) {
    if (x.size() != model.core->dim()) {
      throw Error(ErrorKind::DimensionMismatch, "DBSCAN expects " + std::to_string(model.core->dim()) + " features");
    }
    return std::numeric_limits<double>::infinity();
  }
  return model.core->nearest(x).distance;
}

bool dbscan_predict(const DbscanModel& model, std::span<const double> x) { return dbscan_score(model, x) > model.eps; }

}  // namespace rftwin
