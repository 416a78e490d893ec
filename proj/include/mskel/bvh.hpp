#pragma once

#include <cstdint>
#include <vector>

#include "mskel/mesh.hpp"
#include "mskel/vec.hpp"

namespace mskel {

struct RayCrossings {
  int count = 0;
  /// True when a hit grazed a triangle edge/vertex or a near-coplanar
  /// triangle was encountered, so the parity cannot be trusted.
  bool degenerate = false;
};

/// Binary BVH over triangle bounds, median split on the longest axis.
/// Immutable after construction; queries are thread-safe.
class TriangleBvh {
 public:
  static constexpr int kLeafCapacity = 4;

  explicit TriangleBvh(const TriangleMesh& mesh);

  const Aabb& root_bounds() const { return nodes_[0].bounds; }
  std::size_t triangle_count() const { return tri_index_.size(); }

  /// Counts ray-triangle intersections with t > 0 along a unit direction.
  RayCrossings count_ray_crossings(const Vec3& origin, const Vec3& direction) const;

  /// Exact distance from query to the nearest triangle.
  double closest_distance(const Vec3& query) const;

 private:
  struct Node {
    Aabb bounds;
    std::uint32_t begin = 0;   // leaf: first entry in tri_index_
    std::uint32_t count = 0;   // leaf: number of triangles; 0 for inner nodes
    std::uint32_t right = 0;   // inner: right child (left child is adjacent)
  };

  struct PackedTriangle {
    Vec3 a, b, c;
  };

  std::uint32_t build(std::vector<std::uint32_t>& order,
                      std::vector<Aabb>& tri_bounds,
                      std::vector<Vec3>& centroids,
                      std::uint32_t begin, std::uint32_t end);

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> tri_index_;
  std::vector<PackedTriangle> tris_;
};

/// Exact closest point on triangle (a, b, c) to p; handles face, edge and
/// vertex regions.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace mskel
