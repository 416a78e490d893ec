#include "mskel/mesh.hpp"

#include <map>
#include <utility>

#include "mskel/errors.hpp"

namespace mskel {

void validate_mesh(TriangleMesh& mesh) {
  const std::size_t nv = mesh.vertices.size();
  std::vector<Triangle> kept;
  kept.reserve(mesh.triangles.size());
  std::size_t dropped = 0;
  for (const Triangle& tri : mesh.triangles) {
    for (std::uint32_t idx : tri) {
      if (idx >= nv) throw ParseError("triangle references vertex " + std::to_string(idx) + " out of " + std::to_string(nv));
    }
    const Vec3 a = mesh.vertices[tri[0]];
    const Vec3 b = mesh.vertices[tri[1]];
    const Vec3 c = mesh.vertices[tri[2]];
    double area = 0.5 * norm(cross(b - a, c - a));
    if (area < kDegenerateAreaTol) {
      ++dropped;
      continue;
    }
    kept.push_back(tri);
  }
  mesh.triangles = std::move(kept);
  mesh.degenerate_dropped = dropped;
  if (mesh.triangles.empty()) throw EmptyMesh("mesh has no valid triangles");
}

WatertightReport is_watertight(const TriangleMesh& mesh) {
  // For each undirected edge, track how often each direction is traversed.
  // Consistently wound closed surfaces traverse every edge once per direction.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<int, int>> edges;
  for (const Triangle& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      std::uint32_t a = tri[e];
      std::uint32_t b = tri[(e + 1) % 3];
      if (a < b)
        edges[{a, b}].first++;
      else
        edges[{b, a}].second++;
    }
  }
  WatertightReport report;
  for (const auto& [edge, dirs] : edges) {
    int total = dirs.first + dirs.second;
    if (total == 1) {
      report.boundary_edge_count++;
    } else if (total > 2) {
      report.non_manifold_edge_count++;
    } else if (dirs.first != 1 || dirs.second != 1) {
      report.inconsistent_winding_edge_count++;
    }
  }
  report.closed = report.boundary_edge_count == 0 &&
                  report.non_manifold_edge_count == 0 &&
                  report.inconsistent_winding_edge_count == 0 &&
                  !mesh.triangles.empty();
  return report;
}

Aabb bounding_box(const TriangleMesh& mesh, double padding_fraction) {
  if (mesh.vertices.empty() || mesh.triangles.empty())
    throw EmptyMesh("bounding_box of empty mesh");
  Aabb box;
  for (const Vec3& v : mesh.vertices) box.expand(v);
  if (padding_fraction > 0.0) {
    Vec3 e = box.extent();
    double pad = padding_fraction * std::max(e.x, std::max(e.y, e.z));
    box.lo -= Vec3{pad, pad, pad};
    box.hi += Vec3{pad, pad, pad};
  }
  return box;
}

}  // namespace mskel
