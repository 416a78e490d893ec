#pragma once

#include <cstdint>
#include <vector>

#include "mskel/bvh.hpp"
#include "mskel/vec.hpp"

namespace mskel {

// Unsigned distance from each query point to the mesh surface.
std::vector<double> udf_batch(const TriangleBvh& bvh, const std::vector<Vec3>& points,
                              int threads = 0);

// Signed distance: negative inside, positive outside. Sign comes from ray
// parity, magnitude from the closest-point query.
double signed_distance(const TriangleBvh& bvh, const Vec3& p, std::uint64_t seed = 0);

}  // namespace mskel
