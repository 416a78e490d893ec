#pragma once

#include <cstdint>
#include <vector>

#include "mskel/kdtree.hpp"
#include "mskel/occupancy.hpp"
#include "mskel/vec.hpp"

namespace mskel {

// Residuals below this count as exact neighborhood-local maxima in diagnostics.
inline constexpr double kResidualExactTol = 1e-9;

// Neighborhood maximum of a scalar field over the reflexive k-NN graph.
// out[i] >= field[i] because every row contains the point itself.
std::vector<double> dilate(const std::vector<double>& field, const KnnGraph& graph,
                           int threads = 0);

// dilated[i] - field[i]. Nonnegative; exactly zero iff point i is a local
// maximum of the field over its reflexive neighborhood.
std::vector<double> dilation_residual(const std::vector<double>& field,
                                      const std::vector<double>& dilated);

struct SkeletalSphere {
  Vec3 center;
  double radius = 0.0;    // UDF at the center
  double residual = 0.0;  // dilation residual at the center
  std::uint32_t source_index = 0;
};

struct SkeletonParams {
  int k = 0;
  std::uint64_t box_count = 0;  // zero when lattice sampling was used
  int grid_resolution = 0;      // zero when random sampling was used
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

struct Skeleton {
  // Ascending by (residual, source_index).
  std::vector<SkeletalSphere> spheres;
  SkeletonParams params;
};

// The n samples with smallest residual; ties broken by ascending source index.
// Requires samples.udf to be populated.
Skeleton select_skeleton(const VolumeSamples& samples, const std::vector<double>& residuals,
                         std::size_t n);

// Brute-force ball maximality: flag[i] is false iff some other ball contains
// ball i, i.e. |p_i - p_j| + udf[i] <= udf[j] + 1e-12. O(n^2); intended for
// sample counts up to a few thousand.
std::vector<bool> maximal_ball_oracle(const VolumeSamples& samples);

}  // namespace mskel
