#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mskel/vec.hpp"

namespace mskel {

/// (squared distance, point index); ordered lexicographically so that equal
/// distances resolve to the smaller index everywhere.
struct Neighbor {
  double dist2;
  std::uint32_t index;
  bool operator<(const Neighbor& o) const {
    return dist2 != o.dist2 ? dist2 < o.dist2 : index < o.index;
  }
};

/// Balanced k-d tree over a fixed 3D point set. Immutable after
/// construction; queries are thread-safe.
class PointKdTree {
 public:
  static constexpr std::uint32_t kLeafSize = 16;

  explicit PointKdTree(std::vector<Vec3> points);

  std::size_t size() const { return points_.size(); }
  const std::vector<Vec3>& points() const { return points_; }

  /// k nearest neighbors of an arbitrary query point, ascending by
  /// (distance, index). Returns fewer than k only when the set is smaller.
  std::vector<Neighbor> knn(const Vec3& query, std::size_t k) const;

  Neighbor nearest(const Vec3& query) const;

 private:
  struct Node {
    Aabb bounds;
    std::uint32_t begin = 0;
    std::uint32_t count = 0;  // >0 for leaves
    std::uint32_t right = 0;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::uint32_t node_id, const Vec3& query, std::size_t k,
              std::vector<Neighbor>& heap) const;

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

/// Reflexive neighbor lists: entry i holds i itself followed by its k
/// nearest other points, ascending by (distance, index).
struct KnnGraph {
  int k = 0;
  std::size_t point_count = 0;
  std::vector<std::uint32_t> flat;  // point_count rows of k+1 indices

  std::uint32_t neighbor(std::size_t point, int slot) const {
    return flat[point * (k + 1) + slot];
  }
};

/// Throws TooFewPoints when the set has no k other points to link to.
KnnGraph build_knn_graph(const PointKdTree& tree, int k, int threads = 0);

}  // namespace mskel
