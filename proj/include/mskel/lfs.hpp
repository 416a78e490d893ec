#pragma once

#include <cstdint>
#include <vector>

#include "mskel/morphology.hpp"
#include "mskel/vec.hpp"

namespace mskel {

struct SamplingPrior {
  std::vector<double> lfs;     // distance to the nearest skeletal center
  std::vector<double> weight;  // positive, sums to 1
};

// Distance from each surface point to the nearest skeletal sphere center.
std::vector<double> local_feature_size(const std::vector<Vec3>& surface_points,
                                       const Skeleton& skeleton, int threads = 0);

// raw[i] = 1 / (lfs[i] + eps)^sharpness with eps = 1e-3 * median(lfs), then
// normalized to sum 1. Small lfs => large weight. If the median is zero the
// floor falls back to the mean; if that is zero too the weights are uniform.
SamplingPrior prior_weights(const std::vector<double>& lfs, double sharpness = 1.0);

// m distinct indices drawn without replacement, probability proportional to
// weight. Deterministic per seed; returned in draw order.
std::vector<std::size_t> weighted_sample(const std::vector<Vec3>& points,
                                         const SamplingPrior& prior, std::size_t m,
                                         std::uint64_t seed);

}  // namespace mskel
