#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mskel/vec.hpp"

namespace mskel {

using Triangle = std::array<std::uint32_t, 3>;

/// Indexed triangle surface. Immutable once validated; safe to share across
/// threads.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  /// Triangles discarded by validate() for having area below the tolerance.
  std::size_t degenerate_dropped = 0;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }

  Vec3 triangle_vertex(std::size_t t, int corner) const {
    return vertices[triangles[t][corner]];
  }
  double triangle_area(std::size_t t) const {
    const Vec3 a = triangle_vertex(t, 0);
    return 0.5 * norm(cross(triangle_vertex(t, 1) - a, triangle_vertex(t, 2) - a));
  }
  Vec3 triangle_normal(std::size_t t) const {
    const Vec3 a = triangle_vertex(t, 0);
    return normalized(cross(triangle_vertex(t, 1) - a, triangle_vertex(t, 2) - a));
  }
};

constexpr double kDegenerateAreaTol = 1e-12;

/// Checks indices, drops degenerate triangles, counts them on the mesh.
/// Throws ParseError on out-of-range indices and EmptyMesh if nothing is left.
void validate_mesh(TriangleMesh& mesh);

struct WatertightReport {
  bool closed = false;
  std::size_t boundary_edge_count = 0;
  std::size_t non_manifold_edge_count = 0;
  /// Edges shared by two triangles wound in the same direction.
  std::size_t inconsistent_winding_edge_count = 0;
};

/// Edge-incidence scan: closed iff every undirected edge is shared by exactly
/// two triangles traversing it in opposite directions. Never throws.
WatertightReport is_watertight(const TriangleMesh& mesh);

/// Tight AABB expanded by padding_fraction * max extent on every side.
Aabb bounding_box(const TriangleMesh& mesh, double padding_fraction = 0.0);

}  // namespace mskel
