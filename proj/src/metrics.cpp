#include "mskel/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "mskel/errors.hpp"
#include "mskel/kdtree.hpp"
#include "mskel/parallel.hpp"

namespace mskel {

namespace {

// Per-query nearest distances to `tree`, accumulated in index order so the
// result does not depend on the thread count.
std::vector<double> nearest_distances(const std::vector<Vec3>& queries,
                                      const PointKdTree& tree, int threads) {
  std::vector<double> d(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      d[i] = std::sqrt(tree.nearest(queries[i]).dist2);
  });
  return d;
}

void require_non_empty(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.empty() || b.empty()) throw EmptySet("metric over an empty point set");
}

}  // namespace

double chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b, int threads) {
  require_non_empty(a, b);
  PointKdTree tree_a(a), tree_b(b);
  double mean_ab = 0.0, mean_ba = 0.0;
  for (double d : nearest_distances(a, tree_b, threads)) mean_ab += d;
  for (double d : nearest_distances(b, tree_a, threads)) mean_ba += d;
  return mean_ab / static_cast<double>(a.size()) + mean_ba / static_cast<double>(b.size());
}

double hausdorff(const std::vector<Vec3>& a, const std::vector<Vec3>& b, int threads) {
  require_non_empty(a, b);
  PointKdTree tree_a(a), tree_b(b);
  double worst = 0.0;
  for (double d : nearest_distances(a, tree_b, threads)) worst = std::max(worst, d);
  for (double d : nearest_distances(b, tree_a, threads)) worst = std::max(worst, d);
  return worst;
}

}  // namespace mskel
