#include "mskel/bvh.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "mskel/errors.hpp"

namespace mskel {

namespace {

constexpr double kCoplanarDetTol = 1e-12;
constexpr double kGrazeTol = 1e-9;

/// Ray-box slab test restricted to t in [0, inf). Zero direction components
/// are handled explicitly so no NaNs can leak out of the test.
bool ray_hits_box(const Vec3& origin, const Vec3& dir, const Aabb& box) {
  double tmin = 0.0;
  double tmax = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (dir[i] == 0.0) {
      if (origin[i] < box.lo[i] || origin[i] > box.hi[i]) return false;
      continue;
    }
    double inv = 1.0 / dir[i];
    double t0 = (box.lo[i] - origin[i]) * inv;
    double t1 = (box.hi[i] - origin[i]) * inv;
    if (t0 > t1) std::swap(t0, t1);
    tmin = std::max(tmin, t0);
    tmax = std::min(tmax, t1);
    if (tmin > tmax) return false;
  }
  return true;
}

double point_segment_distance2(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double t = dot(p - a, ab);
  double len2 = dot(ab, ab);
  if (t <= 0.0 || len2 == 0.0) return distance2(p, a);
  if (t >= len2) return distance2(p, b);
  return distance2(p, a + ab * (t / len2));
}

}  // namespace

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Voronoi-region walk (Ericson, Real-Time Collision Detection, 5.1.5).
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  Vec3 bp = p - b;
  double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

  Vec3 cp = p - c;
  double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

  double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
    return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));

  double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

TriangleBvh::TriangleBvh(const TriangleMesh& mesh) {
  const std::size_t n = mesh.triangle_count();
  if (n == 0) throw EmptyMesh("cannot build a bvh over an empty mesh");

  tris_.resize(n);
  std::vector<Aabb> tri_bounds(n);
  std::vector<Vec3> centroids(n);
  for (std::size_t t = 0; t < n; ++t) {
    tris_[t] = {mesh.triangle_vertex(t, 0), mesh.triangle_vertex(t, 1),
                mesh.triangle_vertex(t, 2)};
    tri_bounds[t].expand(tris_[t].a);
    tri_bounds[t].expand(tris_[t].b);
    tri_bounds[t].expand(tris_[t].c);
    centroids[t] = (tris_[t].a + tris_[t].b + tris_[t].c) / 3.0;
  }

  tri_index_.resize(n);
  std::iota(tri_index_.begin(), tri_index_.end(), 0u);
  nodes_.reserve(2 * n);
  build(tri_index_, tri_bounds, centroids, 0, static_cast<std::uint32_t>(n));
}

std::uint32_t TriangleBvh::build(std::vector<std::uint32_t>& order,
                                 std::vector<Aabb>& tri_bounds,
                                 std::vector<Vec3>& centroids,
                                 std::uint32_t begin, std::uint32_t end) {
  std::uint32_t node_id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  Aabb bounds;
  for (std::uint32_t i = begin; i < end; ++i) bounds.expand(tri_bounds[order[i]]);
  nodes_[node_id].bounds = bounds;

  std::uint32_t count = end - begin;
  if (count <= kLeafCapacity) {
    nodes_[node_id].begin = begin;
    nodes_[node_id].count = count;
    return node_id;
  }

  Aabb centroid_bounds;
  for (std::uint32_t i = begin; i < end; ++i) centroid_bounds.expand(centroids[order[i]]);
  int axis = centroid_bounds.longest_axis();
  std::uint32_t mid = begin + count / 2;
  std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                   [&](std::uint32_t lhs, std::uint32_t rhs) {
                     if (centroids[lhs][axis] != centroids[rhs][axis])
                       return centroids[lhs][axis] < centroids[rhs][axis];
                     return lhs < rhs;
                   });

  build(order, tri_bounds, centroids, begin, mid);
  std::uint32_t right = build(order, tri_bounds, centroids, mid, end);
  nodes_[node_id].right = right;
  return node_id;
}

RayCrossings TriangleBvh::count_ray_crossings(const Vec3& origin, const Vec3& dir) const {
  RayCrossings result;
  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    std::uint32_t node_id = stack[--top];
    const Node& node = nodes_[node_id];
    if (!ray_hits_box(origin, dir, node.bounds)) continue;
    if (node.count == 0) {
      stack[top++] = node_id + 1;  // left child is stored adjacently
      stack[top++] = node.right;
      continue;
    }
    for (std::uint32_t i = node.begin; i < node.begin + node.count; ++i) {
      const PackedTriangle& tri = tris_[tri_index_[i]];
      Vec3 e1 = tri.b - tri.a;
      Vec3 e2 = tri.c - tri.a;
      Vec3 pvec = cross(dir, e2);
      double det = dot(e1, pvec);
      if (std::abs(det) < kCoplanarDetTol) {
        // Ray nearly parallel to the triangle plane. It can only disturb the
        // parity if it actually grazes the triangle, so check the plane gap
        // before flagging.
        Vec3 n = cross(e1, e2);
        double nn = norm(n);
        if (nn > 0.0) {
          double plane_gap = std::abs(dot(origin - tri.a, n)) / nn;
          if (plane_gap <= kGrazeTol) {
            Aabb tb;
            tb.expand(tri.a); tb.expand(tri.b); tb.expand(tri.c);
            tb.lo -= Vec3{kGrazeTol, kGrazeTol, kGrazeTol};
            tb.hi += Vec3{kGrazeTol, kGrazeTol, kGrazeTol};
            if (ray_hits_box(origin, dir, tb)) result.degenerate = true;
          }
        }
        continue;
      }
      double inv_det = 1.0 / det;
      Vec3 tvec = origin - tri.a;
      double u = dot(tvec, pvec) * inv_det;
      if (u < 0.0 || u > 1.0) continue;
      Vec3 qvec = cross(tvec, e1);
      double v = dot(dir, qvec) * inv_det;
      if (v < 0.0 || u + v > 1.0) continue;
      double t = dot(e2, qvec) * inv_det;
      if (t <= 0.0) continue;
      ++result.count;
      // A hit close to an edge or vertex may be double-counted between
      // adjacent triangles; mark it so the caller can re-cast.
      Vec3 hit = origin + dir * t;
      double edge_d2 = std::min({point_segment_distance2(hit, tri.a, tri.b),
                                 point_segment_distance2(hit, tri.b, tri.c),
                                 point_segment_distance2(hit, tri.c, tri.a)});
      if (edge_d2 <= kGrazeTol * kGrazeTol) result.degenerate = true;
    }
  }
  return result;
}

double TriangleBvh::closest_distance(const Vec3& query) const {
  double best2 = std::numeric_limits<double>::infinity();
  // (node, lower bound) pairs; visit nearer child first and prune on best2
  struct Entry {
    std::uint32_t node;
    double bound2;
  };
  Entry stack[64];
  int top = 0;
  stack[top++] = {0, nodes_[0].bounds.distance2(query)};
  while (top > 0) {
    Entry entry = stack[--top];
    if (entry.bound2 >= best2) continue;
    const Node& node = nodes_[entry.node];
    if (node.count > 0) {
      for (std::uint32_t i = node.begin; i < node.begin + node.count; ++i) {
        const PackedTriangle& tri = tris_[tri_index_[i]];
        Vec3 cp = closest_point_on_triangle(query, tri.a, tri.b, tri.c);
        best2 = std::min(best2, distance2(query, cp));
      }
      continue;
    }
    std::uint32_t left = entry.node + 1;
    std::uint32_t right = node.right;
    double dl = nodes_[left].bounds.distance2(query);
    double dr = nodes_[right].bounds.distance2(query);
    if (dl > dr) {
      std::swap(left, right);
      std::swap(dl, dr);
    }
    if (dr < best2) stack[top++] = {right, dr};
    if (dl < best2) stack[top++] = {left, dl};
  }
  return std::sqrt(best2);
}

}  // namespace mskel
