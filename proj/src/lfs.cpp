#include "mskel/lfs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mskel/errors.hpp"
#include "mskel/kdtree.hpp"
#include "mskel/parallel.hpp"
#include "mskel/rng.hpp"

namespace mskel {

std::vector<double> local_feature_size(const std::vector<Vec3>& surface_points,
                                       const Skeleton& skeleton, int threads) {
  if (skeleton.spheres.empty()) throw EmptySkeleton("skeleton has no spheres");
  std::vector<Vec3> centers;
  centers.reserve(skeleton.spheres.size());
  for (const SkeletalSphere& s : skeleton.spheres) centers.push_back(s.center);
  PointKdTree tree(std::move(centers));

  std::vector<double> lfs(surface_points.size());
  parallel_for(surface_points.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      lfs[i] = std::sqrt(tree.nearest(surface_points[i]).dist2);
  });
  return lfs;
}

SamplingPrior prior_weights(const std::vector<double>& lfs, double sharpness) {
  if (lfs.empty()) throw EmptySet("lfs vector is empty");
  if (!(sharpness > 0.0)) throw InvalidConfig("sharpness must be positive");

  std::vector<double> sorted(lfs);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t count = sorted.size();
  double median = count % 2 ? sorted[count / 2]
                            : 0.5 * (sorted[count / 2 - 1] + sorted[count / 2]);
  double floor_base = median;
  if (floor_base == 0.0)
    floor_base = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(count);

  SamplingPrior prior;
  prior.lfs = lfs;
  prior.weight.resize(count);
  if (floor_base == 0.0) {
    // Every point touches a skeletal center: no scale to work with, go uniform.
    std::fill(prior.weight.begin(), prior.weight.end(), 1.0 / static_cast<double>(count));
    return prior;
  }

  const double eps = 1e-3 * floor_base;
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    prior.weight[i] = std::pow(lfs[i] + eps, -sharpness);
    total += prior.weight[i];
  }
  for (double& w : prior.weight) w /= total;
  return prior;
}

std::vector<std::size_t> weighted_sample(const std::vector<Vec3>& points,
                                         const SamplingPrior& prior, std::size_t m,
                                         std::uint64_t seed) {
  if (prior.weight.size() != points.size())
    throw LengthMismatch("prior does not match point count");
  if (m < 1) throw InvalidConfig("sample count must be positive");
  if (m > points.size())
    throw SubsetTooLarge("requested " + std::to_string(m) + " of " +
                         std::to_string(points.size()) + " points");

  // Weighted reservoir draw: key_i = exp(1/w_i) variate; the m smallest keys
  // are a without-replacement sample proportional to weight.
  Rng rng = Rng::for_index(seed, 0);
  std::vector<std::pair<double, std::size_t>> keyed(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double u = rng.next_double();
    while (u <= 0.0) u = rng.next_double();
    keyed[i] = {-std::log(u) / prior.weight[i], i};
  }
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(m), keyed.end());
  std::vector<std::size_t> picked(m);
  for (std::size_t i = 0; i < m; ++i) picked[i] = keyed[i].second;
  return picked;
}

}  // namespace mskel
