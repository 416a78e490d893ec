#include "mskel/kdtree.hpp"

#include <algorithm>
#include <numeric>

#include "mskel/errors.hpp"
#include "mskel/parallel.hpp"

namespace mskel {

PointKdTree::PointKdTree(std::vector<Vec3> points) : points_(std::move(points)) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (points_.empty()) return;
  nodes_.reserve(points_.size() / (kLeafSize / 2) + 2);
  build(0, static_cast<std::uint32_t>(points_.size()));
}

std::uint32_t PointKdTree::build(std::uint32_t begin, std::uint32_t end) {
  std::uint32_t node_id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  Aabb bounds;
  for (std::uint32_t i = begin; i < end; ++i) bounds.expand(points_[order_[i]]);
  nodes_[node_id].bounds = bounds;

  std::uint32_t count = end - begin;
  if (count <= kLeafSize) {
    nodes_[node_id].begin = begin;
    nodes_[node_id].count = count;
    return node_id;
  }

  int axis = bounds.longest_axis();
  std::uint32_t mid = begin + count / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t lhs, std::uint32_t rhs) {
                     if (points_[lhs][axis] != points_[rhs][axis])
                       return points_[lhs][axis] < points_[rhs][axis];
                     return lhs < rhs;
                   });
  build(begin, mid);
  nodes_[node_id].right = build(mid, end);
  return node_id;
}

void PointKdTree::search(std::uint32_t node_id, const Vec3& query, std::size_t k,
                         std::vector<Neighbor>& heap) const {
  const Node& node = nodes_[node_id];
  if (node.count > 0) {
    for (std::uint32_t i = node.begin; i < node.begin + node.count; ++i) {
      std::uint32_t idx = order_[i];
      Neighbor cand{distance2(query, points_[idx]), idx};
      if (heap.size() < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end());
      } else if (cand < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    return;
  }
  std::uint32_t left = node_id + 1;
  std::uint32_t right = node.right;
  double dl = nodes_[left].bounds.distance2(query);
  double dr = nodes_[right].bounds.distance2(query);
  if (dl > dr) {
    std::swap(left, right);
    std::swap(dl, dr);
  }
  // visit nearer child first; the bound test must stay non-strict on ties so
  // a smaller index in the farther child can still displace an equal distance
  if (heap.size() < k || dl <= heap.front().dist2) search(left, query, k, heap);
  if (heap.size() < k || dr <= heap.front().dist2) search(right, query, k, heap);
}

std::vector<Neighbor> PointKdTree::knn(const Vec3& query, std::size_t k) const {
  std::vector<Neighbor> heap;
  if (k == 0 || points_.empty()) return heap;
  heap.reserve(k + 1);
  search(0, query, k, heap);
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

Neighbor PointKdTree::nearest(const Vec3& query) const {
  std::vector<Neighbor> result = knn(query, 1);
  if (result.empty()) throw EmptySet("nearest query on empty tree");
  return result[0];
}

KnnGraph build_knn_graph(const PointKdTree& tree, int k, int threads) {
  const std::size_t n = tree.size();
  if (k < 1) throw InvalidConfig("knn graph requires k >= 1");
  if (n <= static_cast<std::size_t>(k))
    throw TooFewPoints("need more than k=" + std::to_string(k) + " points, have " +
                       std::to_string(n));

  KnnGraph graph;
  graph.k = k;
  graph.point_count = n;
  graph.flat.resize(n * (k + 1));

  const auto& points = tree.points();
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      // k+1 covers the point itself, which is in the tree at distance zero
      std::vector<Neighbor> found = tree.knn(points[i], static_cast<std::size_t>(k) + 1);
      std::uint32_t* row = &graph.flat[i * (k + 1)];
      row[0] = static_cast<std::uint32_t>(i);
      // drop the self entry from the k+1 results; when duplicates of point i
      // crowd it out entirely the k+1 results already hold k+1 other points
      int slot = 1;
      for (const Neighbor& nb : found) {
        if (nb.index == i || slot > k) continue;
        row[slot++] = nb.index;
      }
    }
  });
  return graph;
}

}  // namespace mskel
