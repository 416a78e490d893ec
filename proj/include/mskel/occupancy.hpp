#pragma once

#include <cstdint>
#include <vector>

#include "mskel/bvh.hpp"
#include "mskel/mesh.hpp"
#include "mskel/vec.hpp"

namespace mskel {

/// Candidate inner points of a closed surface, with their distances to the
/// surface once the field pass has run.
struct VolumeSamples {
  enum class Source { kUniformRandom, kGrid, kExplicit };

  std::vector<Vec3> points;
  Source source = Source::kExplicit;
  std::uint64_t box_count = 0;   // draws, for the random source
  int grid_resolution = 0;       // per axis, for the grid source
  std::uint64_t seed = 0;
  std::vector<double> udf;       // empty until filled by the distance pass

  std::size_t size() const { return points.size(); }
};

/// Inside/outside classification by ray-crossing parity. Degenerate casts are
/// retried along fresh directions from a per-point stream, so the result only
/// depends on (mesh, point, seed). Throws DegenerateOccupancy when every cast
/// grazes the mesh.
int occupancy(const TriangleBvh& bvh, const Vec3& p, std::uint64_t seed = 0);

/// Occupancy-filters an arbitrary candidate set, keeping input order.
VolumeSamples filter_inner_points(const TriangleBvh& bvh,
                                  const std::vector<Vec3>& candidates,
                                  std::uint64_t seed = 0, int threads = 0);

/// Wall-clock split of a sampling pass, for reporting.
struct SampleTimings {
  double sampling_seconds = 0.0;   // candidate generation
  double occupancy_seconds = 0.0;  // parity filtering
};

/// Draws box_count uniform points in the tight bounding box and keeps the
/// inner ones in draw order. Throws NoInnerPoints when none survive.
VolumeSamples sample_inner_points_random(const TriangleMesh& mesh, const TriangleBvh& bvh,
                                         std::uint64_t box_count, std::uint64_t seed,
                                         int threads = 0, SampleTimings* timings = nullptr);

/// Cell-centered resolution^3 lattice over the bounding box, occupancy
/// filtered, in row-major order (x outermost, z innermost).
VolumeSamples sample_inner_points_grid(const TriangleMesh& mesh, const TriangleBvh& bvh,
                                       int resolution, std::uint64_t seed = 0,
                                       int threads = 0, SampleTimings* timings = nullptr);

/// The i-th candidate of the random sampler, exposed so callers can rebuild
/// the draw sequence without materializing it.
Vec3 random_box_point(const Aabb& box, std::uint64_t seed, std::uint64_t index);

}  // namespace mskel
