#include "mskel/distance.hpp"

#include "mskel/occupancy.hpp"
#include "mskel/parallel.hpp"

namespace mskel {

std::vector<double> udf_batch(const TriangleBvh& bvh, const std::vector<Vec3>& points,
                              int threads) {
  std::vector<double> out(points.size());
  parallel_for(points.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = bvh.closest_distance(points[i]);
  });
  return out;
}

double signed_distance(const TriangleBvh& bvh, const Vec3& p, std::uint64_t seed) {
  double d = bvh.closest_distance(p);
  return occupancy(bvh, p, seed) ? -d : d;
}

}  // namespace mskel
