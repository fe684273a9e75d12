#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "rftwin/feature_matrix.hpp"

namespace rftwin {

double euclidean(std::span<const double> a, std::span<const double> b) noexcept;

struct Neighbor {
  double distance = 0.0;
  std::size_t index = 0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
  /// Total order used everywhere: distance first, then point index.
  friend bool operator<(const Neighbor& a, const Neighbor& b) noexcept {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  }
};

enum class KnnBackend { Auto, BruteForce, VpTree };

/// Exact k-nearest-neighbour search over a fixed point set. Both backends
/// return the same neighbours in the same (distance, index) order.
class KnnIndex {
 public:
  /// Auto picks the VP tree at or above this many points, and only in
  /// low dimension where it actually prunes (see rftwin_bench).
  static constexpr std::size_t kVpTreeMinPoints = 4096;
  static constexpr std::size_t kVpTreeMaxDim = 16;

  explicit KnnIndex(FeatureMatrix points, KnnBackend backend = KnnBackend::Auto);

  /// k nearest points to `query`, optionally skipping one stored index
  /// (used for leave-one-out queries on the indexed set itself).
  std::vector<Neighbor> query(std::span<const double> query, std::size_t k,
                              std::optional<std::size_t> exclude = std::nullopt) const;

  Neighbor nearest(std::span<const double> query) const;

  const FeatureMatrix& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.rows(); }
  std::size_t dim() const noexcept { return points_.cols(); }
  KnnBackend backend() const noexcept { return backend_; }

 private:
  struct Node {
    std::size_t begin = 0;  // range into order_
    std::size_t end = 0;
    std::size_t vantage = 0;
    double radius = 0.0;
    int inside = -1;
    int outside = -1;
    bool leaf = true;
  };

  int build(std::size_t begin, std::size_t end);
  void search(int node, std::span<const double> q, std::size_t k, std::optional<std::size_t> exclude,
              std::vector<Neighbor>& heap) const;
  std::vector<Neighbor> brute_force(std::span<const double> q, std::size_t k,
                                    std::optional<std::size_t> exclude) const;

  FeatureMatrix points_;
  KnnBackend backend_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace rftwin
