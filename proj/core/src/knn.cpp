#include "rftwin/knn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rftwin/error.hpp"

namespace rftwin {

namespace {

constexpr std::size_t kLeafSize = 16;

void push_candidate(std::vector<Neighbor>& heap, std::size_t k, Neighbor n) {
  if (heap.size() < k) {
    heap.push_back(n);
    std::push_heap(heap.begin(), heap.end());
  } else if (n < heap.front()) {
    std::pop_heap(heap.begin(), heap.end());
    heap.back() = n;
    std::push_heap(heap.begin(), heap.end());
  }
}

}  // namespace

double euclidean(std::span<const double> a, std::span<const double> b) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

KnnIndex::KnnIndex(FeatureMatrix points, KnnBackend backend) : points_(std::move(points)), backend_(backend) {
  if (backend_ == KnnBackend::Auto) {
    backend_ = points_.rows() >= kVpTreeMinPoints && points_.cols() <= kVpTreeMaxDim ? KnnBackend::VpTree
                                                                                    : KnnBackend::BruteForce;
  }
  if (backend_ == KnnBackend::VpTree && points_.rows() > 0) {
    order_.resize(points_.rows());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    nodes_.reserve(2 * points_.rows() / kLeafSize + 1);
    build(0, order_.size());
  }
}

int KnnIndex::build(std::size_t begin, std::size_t end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({begin, end});
  if (end - begin <= kLeafSize) return id;

  // Vantage point: the first element of the range; the remaining points are
  // split at the median distance to it.
  const std::size_t vp = order_[begin];
  const auto vp_row = points_.row(vp);
  std::vector<Neighbor> dist;
  dist.reserve(end - begin - 1);
  for (std::size_t i = begin + 1; i < end; ++i) dist.push_back({euclidean(vp_row, points_.row(order_[i])), order_[i]});
  const std::size_t mid = dist.size() / 2;
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
  for (std::size_t i = 0; i < dist.size(); ++i) order_[begin + 1 + i] = dist[i].index;

  const double radius = dist[mid].distance;
  const std::size_t split = begin + 1 + mid;
  const int inside = build(begin + 1, split);
  const int outside = build(split, end);
  auto& node = nodes_[static_cast<std::size_t>(id)];
  node.leaf = false;
  node.vantage = vp;
  node.radius = radius;
  node.inside = inside;
  node.outside = outside;
  return id;
}

void KnnIndex::search(int node_id, std::span<const double> q, std::size_t k, std::optional<std::size_t> exclude,
                      std::vector<Neighbor>& heap) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.leaf) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const std::size_t idx = order_[i];
      if (exclude && *exclude == idx) continue;
      push_candidate(heap, k, {euclidean(q, points_.row(idx)), idx});
    }
    return;
  }
  const double d = euclidean(q, points_.row(node.vantage));
  if (!(exclude && *exclude == node.vantage)) push_candidate(heap, k, {d, node.vantage});

  // Bounds are compared non-strictly with a little slack so that points at
  // exactly the current k-th distance are still visited (index tie-break).
  auto tau = [&] {
    return heap.size() < k ? std::numeric_limits<double>::infinity() : heap.front().distance;
  };
  auto slack = [](double t) { return 1e-9 * (1.0 + t); };
  auto visit_inside = [&] {
    const double t = tau();
    if (d - node.radius <= t + slack(t)) search(node.inside, q, k, exclude, heap);
  };
  auto visit_outside = [&] {
    const double t = tau();
    if (node.radius - d <= t + slack(t)) search(node.outside, q, k, exclude, heap);
  };
  if (d < node.radius) {
    visit_inside();
    visit_outside();
  } else {
    visit_outside();
    visit_inside();
  }
}

std::vector<Neighbor> KnnIndex::brute_force(std::span<const double> q, std::size_t k,
                                            std::optional<std::size_t> exclude) const {
  std::vector<Neighbor> all;
  all.reserve(points_.rows());
  for (std::size_t i = 0; i < points_.rows(); ++i) {
    if (exclude && *exclude == i) continue;
    all.push_back({euclidean(q, points_.row(i)), i});
  }
  const std::size_t take = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end());
  all.resize(take);
  return all;
}

std::vector<Neighbor> KnnIndex::query(std::span<const double> q, std::size_t k,
                                      std::optional<std::size_t> exclude) const {
  if (q.size() != dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "query has " + std::to_string(q.size()) + " features, index has " + std::to_string(dim()));
  }
  if (k == 0 || points_.rows() == 0) return {};
  if (backend_ == KnnBackend::BruteForce) return brute_force(q, k, exclude);

  std::vector<Neighbor> heap;
  heap.reserve(k + 1);
  search(0, q, k, exclude, heap);
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

Neighbor KnnIndex::nearest(std::span<const double> q) const {
  const auto n = query(q, 1);
  if (n.empty()) throw Error(ErrorKind::EmptyTrainingSet, "nearest-neighbour query on an empty index");
  return n.front();
}

}  // namespace rftwin
