#include "mskel/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "mskel/errors.hpp"

namespace mskel {

namespace {

constexpr double kPi = 3.14159265358979323846;

double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double len2 = norm2(ab);
  if (len2 == 0.0) return distance(p, a);
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

// --- convex planar polygons (box medial sheets) -----------------------------

using Polygon = std::vector<Vec3>;

struct HalfSpace {
  Vec3 normal;  // keep points with normal . q <= offset
  double offset;
};

Polygon clip(const Polygon& poly, const HalfSpace& hs) {
  constexpr double kEps = 1e-12;
  Polygon out;
  const std::size_t count = poly.size();
  for (std::size_t i = 0; i < count; ++i) {
    const Vec3& a = poly[i];
    const Vec3& b = poly[(i + 1) % count];
    double da = dot(hs.normal, a) - hs.offset;
    double db = dot(hs.normal, b) - hs.offset;
    bool in_a = da <= kEps;
    bool in_b = db <= kEps;
    if (in_a) out.push_back(a);
    if (in_a != in_b) {
      double t = da / (da - db);
      out.push_back(a + (b - a) * t);
    }
  }
  return out;
}

Vec3 newell_normal(const Polygon& poly) {
  Vec3 n{0, 0, 0};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec3& a = poly[i];
    const Vec3& b = poly[(i + 1) % poly.size()];
    n.x += (a.y - b.y) * (a.z + b.z);
    n.y += (a.z - b.z) * (a.x + b.x);
    n.z += (a.x - b.x) * (a.y + b.y);
  }
  return n;
}

double polygon_distance(const Vec3& p, const Polygon& poly) {
  if (poly.empty()) return std::numeric_limits<double>::infinity();
  if (poly.size() == 1) return distance(p, poly[0]);
  Vec3 n = newell_normal(poly);
  double n_len = norm(n);
  if (poly.size() >= 3 && n_len > 1e-12) {
    n = n / n_len;
    Vec3 q = p - n * dot(p - poly[0], n);
    bool inside = true;
    for (std::size_t i = 0; i < poly.size() && inside; ++i) {
      const Vec3& a = poly[i];
      const Vec3& b = poly[(i + 1) % poly.size()];
      if (dot(cross(b - a, q - a), n) < -1e-12) inside = false;
    }
    if (inside) return std::abs(dot(p - poly[0], n));
  }
  // Degenerate sliver or projection outside: boundary segments decide.
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i)
    best = std::min(best, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return best;
}

// --- icosphere --------------------------------------------------------------

TriangleMesh icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh mesh;
  mesh.vertices = {{-1, t, 0},  {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                   {0, -1, t},  {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                   {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  mesh.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                    {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                    {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                    {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return mesh;
}

class SphereShape final : public AnalyticShape {
 public:
  SphereShape(double radius, int subdiv) : radius_(radius), subdiv_(subdiv) {
    if (!(radius > 0.0)) throw InvalidConfig("sphere radius must be positive");
    if (subdiv < 0 || subdiv > 7)
      throw UnsupportedResolution("sphere subdivision must be in [0, 7]");
  }

  std::string name() const override { return "sphere"; }

  TriangleMesh generate_mesh() const override {
    TriangleMesh mesh = icosahedron();
    for (Vec3& v : mesh.vertices) v = normalized(v);
    for (int step = 0; step < subdiv_; ++step) {
      std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoint;
      auto mid = [&](std::uint32_t a, std::uint32_t b) {
        std::pair<std::uint32_t, std::uint32_t> key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        std::uint32_t id = static_cast<std::uint32_t>(mesh.vertices.size());
        mesh.vertices.push_back(normalized((mesh.vertices[a] + mesh.vertices[b]) * 0.5));
        midpoint.emplace(key, id);
        return id;
      };
      std::vector<Triangle> next;
      next.reserve(mesh.triangles.size() * 4);
      for (const Triangle& f : mesh.triangles) {
        std::uint32_t ab = mid(f[0], f[1]);
        std::uint32_t bc = mid(f[1], f[2]);
        std::uint32_t ca = mid(f[2], f[0]);
        next.push_back({f[0], ab, ca});
        next.push_back({f[1], bc, ab});
        next.push_back({f[2], ca, bc});
        next.push_back({ab, bc, ca});
      }
      mesh.triangles = std::move(next);
    }
    for (Vec3& v : mesh.vertices) v = v * radius_;
    return mesh;
  }

  bool contains(const Vec3& p) const override { return norm(p) < radius_; }
  double surface_distance(const Vec3& p) const override { return std::abs(norm(p) - radius_); }
  double skeleton_distance(const Vec3& p) const override { return norm(p); }

  double tessellation_deviation() const override {
    // Vertices sit on the sphere, faces are chords: the gap is the worst
    // plane-to-origin deficit over all faces.
    TriangleMesh mesh = generate_mesh();
    double min_plane = radius_;
    for (const Triangle& f : mesh.triangles) {
      Vec3 n = normalized(cross(mesh.vertices[f[1]] - mesh.vertices[f[0]],
                                mesh.vertices[f[2]] - mesh.vertices[f[0]]));
      min_plane = std::min(min_plane, std::abs(dot(n, mesh.vertices[f[0]])));
    }
    return radius_ - min_plane;
  }

 private:
  double radius_;
  int subdiv_;
};

// --- box --------------------------------------------------------------------

class BoxShape final : public AnalyticShape {
 public:
  BoxShape(double a, double b, double c) : half_{a / 2, b / 2, c / 2} {
    if (!(a > 0.0 && b > 0.0 && c > 0.0))
      throw InvalidConfig("box edge lengths must be positive");
    build_medial_pieces();
  }

  std::string name() const override { return "box"; }

  TriangleMesh generate_mesh() const override {
    const double x = half_.x, y = half_.y, z = half_.z;
    TriangleMesh mesh;
    mesh.vertices = {{-x, -y, -z}, {-x, -y, z}, {-x, y, -z}, {-x, y, z},
                     {x, -y, -z},  {x, -y, z},  {x, y, -z},  {x, y, z}};
    mesh.triangles = {{0, 1, 3}, {0, 3, 2},   // -x
                      {4, 6, 7}, {4, 7, 5},   // +x
                      {0, 4, 5}, {0, 5, 1},   // -y
                      {2, 3, 7}, {2, 7, 6},   // +y
                      {0, 2, 6}, {0, 6, 4},   // -z
                      {1, 5, 7}, {1, 7, 3}};  // +z
    return mesh;
  }

  bool contains(const Vec3& p) const override {
    return std::abs(p.x) < half_.x && std::abs(p.y) < half_.y && std::abs(p.z) < half_.z;
  }

  double surface_distance(const Vec3& p) const override {
    Vec3 q{std::abs(p.x) - half_.x, std::abs(p.y) - half_.y, std::abs(p.z) - half_.z};
    Vec3 outside{std::max(q.x, 0.0), std::max(q.y, 0.0), std::max(q.z, 0.0)};
    double inside = std::min(std::max(q.x, std::max(q.y, q.z)), 0.0);
    return std::abs(norm(outside) + inside);
  }

  // The medial set folds into the positive octant as at most six convex
  // pieces: one sheet per axis pair where the two face distances tie, and one
  // mid-plane sheet per axis where the opposite faces of that axis tie.
  double skeleton_distance(const Vec3& p) const override {
    Vec3 q{std::abs(p.x), std::abs(p.y), std::abs(p.z)};
    double best = std::numeric_limits<double>::infinity();
    for (const Polygon& piece : medial_) best = std::min(best, polygon_distance(q, piece));
    return best;
  }

  double tessellation_deviation() const override { return 0.0; }

 private:
  static Vec3 axis(int i) { return {i == 0 ? 1.0 : 0.0, i == 1 ? 1.0 : 0.0, i == 2 ? 1.0 : 0.0}; }

  void build_medial_pieces() {
    const double h[3] = {half_.x, half_.y, half_.z};
    const double big = 10.0 * (h[0] + h[1] + h[2] + 1.0);

    auto box_clips = [&](std::vector<HalfSpace>& clips) {
      for (int t = 0; t < 3; ++t) {
        clips.push_back({axis(t) * -1.0, 0.0});
        clips.push_back({axis(t), h[t]});
      }
    };
    auto seed_square = [&](const Vec3& origin, const Vec3& u, const Vec3& v) {
      return Polygon{origin - u * big - v * big, origin + u * big - v * big,
                     origin + u * big + v * big, origin - u * big + v * big};
    };
    auto add_piece = [&](Polygon poly, const std::vector<HalfSpace>& clips) {
      for (const HalfSpace& hs : clips) poly = clip(poly, hs);
      if (!poly.empty()) medial_.push_back(std::move(poly));
    };

    // Pair sheets: h_i - q_i = h_j - q_j <= h_k - q_k inside the octant box.
    const int pairs[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
    for (const auto& idx : pairs) {
      int i = idx[0], j = idx[1], k = idx[2];
      Vec3 plane_n = normalized(axis(i) - axis(j));
      Vec3 on_plane = axis(i) * h[i] + axis(j) * h[j];
      Vec3 u = axis(k);
      Vec3 v = cross(plane_n, u);
      std::vector<HalfSpace> clips;
      box_clips(clips);
      clips.push_back({axis(k) - axis(i), h[k] - h[i]});  // d_i <= d_k
      add_piece(seed_square(on_plane, u, v), clips);
    }

    // Mid-plane sheets: q_i = 0 where the axis-i face pair is nearest.
    for (int i = 0; i < 3; ++i) {
      int j = (i + 1) % 3, k = (i + 2) % 3;
      std::vector<HalfSpace> clips;
      for (int t : {j, k}) {
        clips.push_back({axis(t) * -1.0, 0.0});
        clips.push_back({axis(t), h[t] - h[i]});  // h_i <= d_t
      }
      add_piece(seed_square({0, 0, 0}, axis(j), axis(k)), clips);
    }
  }

  Vec3 half_;
  std::vector<Polygon> medial_;
};

// --- torus ------------------------------------------------------------------

class TorusShape final : public AnalyticShape {
 public:
  TorusShape(double major, double minor, int res_major, int res_minor)
      : major_(major), minor_(minor), res_major_(res_major), res_minor_(res_minor) {
    if (!(minor > 0.0 && major > minor))
      throw InvalidConfig("torus requires 0 < r < R");
    if (res_major < 3 || res_minor < 3 || res_major > 4096 || res_minor > 4096)
      throw UnsupportedResolution("torus resolution must be in [3, 4096]");
  }

  std::string name() const override { return "torus"; }

  TriangleMesh generate_mesh() const override {
    TriangleMesh mesh;
    mesh.vertices.reserve(static_cast<std::size_t>(res_major_) * res_minor_);
    for (int i = 0; i < res_major_; ++i) {
      double theta = 2.0 * kPi * i / res_major_;
      for (int j = 0; j < res_minor_; ++j) {
        double phi = 2.0 * kPi * j / res_minor_;
        double ring = major_ + minor_ * std::cos(phi);
        mesh.vertices.push_back(
            {ring * std::cos(theta), ring * std::sin(theta), minor_ * std::sin(phi)});
      }
    }
    auto id = [&](int i, int j) {
      return static_cast<std::uint32_t>((i % res_major_) * res_minor_ + (j % res_minor_));
    };
    for (int i = 0; i < res_major_; ++i)
      for (int j = 0; j < res_minor_; ++j) {
        std::uint32_t v00 = id(i, j), v10 = id(i + 1, j);
        std::uint32_t v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
        mesh.triangles.push_back({v00, v10, v11});
        mesh.triangles.push_back({v00, v11, v01});
      }
    return mesh;
  }

  bool contains(const Vec3& p) const override { return tube_distance(p) < minor_; }
  double surface_distance(const Vec3& p) const override {
    return std::abs(tube_distance(p) - minor_);
  }
  double skeleton_distance(const Vec3& p) const override { return tube_distance(p); }

  double tessellation_deviation() const override {
    return minor_ * (1.0 - std::cos(kPi / res_minor_)) +
           (major_ + minor_) * (1.0 - std::cos(kPi / res_major_));
  }

 private:
  double tube_distance(const Vec3& p) const {
    double ring = std::sqrt(p.x * p.x + p.y * p.y) - major_;
    return std::sqrt(ring * ring + p.z * p.z);
  }

  double major_, minor_;
  int res_major_, res_minor_;
};

// --- capsule ----------------------------------------------------------------

class CapsuleShape final : public AnalyticShape {
 public:
  CapsuleShape(double radius, double height, int res)
      : radius_(radius), height_(height), res_(res) {
    if (!(radius > 0.0 && height > 0.0))
      throw InvalidConfig("capsule radius and height must be positive");
    if (res < 8 || res > 1024)
      throw UnsupportedResolution("capsule resolution must be in [8, 1024]");
  }

  std::string name() const override { return "capsule"; }

  TriangleMesh generate_mesh() const override {
    const int cap = std::max(2, res_ / 4);
    const int side = std::max(1, res_ / 4);

    // Revolution profile (ring radius, ring z), bottom to top; poles separate.
    std::vector<std::pair<double, double>> rings;
    for (int a = 1; a <= cap; ++a) {
      double phi = -kPi / 2 + (kPi / 2) * a / cap;
      rings.push_back({radius_ * std::cos(phi), -height_ / 2 + radius_ * std::sin(phi)});
    }
    for (int s = 1; s < side; ++s)
      rings.push_back({radius_, -height_ / 2 + height_ * s / side});
    for (int b = 0; b < cap; ++b) {
      double phi = (kPi / 2) * b / cap;
      rings.push_back({radius_ * std::cos(phi), height_ / 2 + radius_ * std::sin(phi)});
    }

    TriangleMesh mesh;
    mesh.vertices.push_back({0, 0, -height_ / 2 - radius_});
    mesh.vertices.push_back({0, 0, height_ / 2 + radius_});
    for (const auto& [rho, z] : rings)
      for (int u = 0; u < res_; ++u) {
        double theta = 2.0 * kPi * u / res_;
        mesh.vertices.push_back({rho * std::cos(theta), rho * std::sin(theta), z});
      }

    auto id = [&](std::size_t ring, int u) {
      return static_cast<std::uint32_t>(2 + ring * res_ + static_cast<std::size_t>(u % res_));
    };
    for (int u = 0; u < res_; ++u) mesh.triangles.push_back({0, id(0, u + 1), id(0, u)});
    for (std::size_t t = 0; t + 1 < rings.size(); ++t)
      for (int u = 0; u < res_; ++u) {
        std::uint32_t a = id(t, u), b = id(t, u + 1);
        std::uint32_t c = id(t + 1, u + 1), d = id(t + 1, u);
        mesh.triangles.push_back({a, b, c});
        mesh.triangles.push_back({a, c, d});
      }
    std::size_t last = rings.size() - 1;
    for (int u = 0; u < res_; ++u) mesh.triangles.push_back({1, id(last, u), id(last, u + 1)});
    return mesh;
  }

  bool contains(const Vec3& p) const override { return axis_distance(p) < radius_; }
  double surface_distance(const Vec3& p) const override {
    return std::abs(axis_distance(p) - radius_);
  }
  double skeleton_distance(const Vec3& p) const override { return axis_distance(p); }

  double tessellation_deviation() const override {
    const int cap = std::max(2, res_ / 4);
    return radius_ * (1.0 - std::cos(kPi / res_)) +
           radius_ * (1.0 - std::cos(kPi / (2.0 * cap)));
  }

 private:
  double axis_distance(const Vec3& p) const {
    return segment_distance(p, {0, 0, -height_ / 2}, {0, 0, height_ / 2});
  }

  double radius_, height_;
  int res_;
};

// --- cylinder with a thin fin ----------------------------------------------

class FinCylinderShape final : public AnalyticShape {
 public:
  FinCylinderShape(double radius, double height, double fin_height, int res)
      : radius_(radius), height_(height), fin_height_(fin_height), res_(res) {
    if (!(radius > 0.0 && height > 0.0 && fin_height >= 0.0))
      throw InvalidConfig("fin cylinder dimensions must be positive");
    if (res < 24 || res > 2048)
      throw UnsupportedResolution("fin cylinder resolution must be in [24, 2048]");
    for (int u = 0; u < res_; ++u) {
      double theta = -kPi + 2.0 * kPi * u / res_;
      double rho = profile_radius(theta);
      section_.push_back({rho * std::cos(theta), rho * std::sin(theta)});
    }
  }

  std::string name() const override { return "fin_cylinder"; }

  double profile_radius(double theta) const {
    if (std::abs(theta) >= kFinHalfWidth) return radius_;
    double c = std::cos(kPi * theta / (2.0 * kFinHalfWidth));
    return radius_ + fin_height_ * c * c;
  }

  TriangleMesh generate_mesh() const override {
    const int levels = std::max(1, res_ / 6);
    TriangleMesh mesh;
    mesh.vertices.push_back({0, 0, -height_ / 2});
    mesh.vertices.push_back({0, 0, height_ / 2});
    for (int t = 0; t <= levels; ++t) {
      double z = -height_ / 2 + height_ * t / levels;
      for (const auto& [x, y] : section_) mesh.vertices.push_back({x, y, z});
    }
    auto id = [&](int level, int u) {
      return static_cast<std::uint32_t>(2 + static_cast<std::size_t>(level) * res_ +
                                        static_cast<std::size_t>(u % res_));
    };
    for (int u = 0; u < res_; ++u) mesh.triangles.push_back({0, id(0, u + 1), id(0, u)});
    for (int t = 0; t < levels; ++t)
      for (int u = 0; u < res_; ++u) {
        std::uint32_t a = id(t, u), b = id(t, u + 1);
        std::uint32_t c = id(t + 1, u + 1), d = id(t + 1, u);
        mesh.triangles.push_back({a, b, c});
        mesh.triangles.push_back({a, c, d});
      }
    for (int u = 0; u < res_; ++u) mesh.triangles.push_back({1, id(levels, u), id(levels, u + 1)});
    return mesh;
  }

  // The analytic queries treat the solid as the prism over the tessellated
  // cross-section, which the side wall reproduces exactly.
  bool contains(const Vec3& p) const override { return signed_distance(p) < 0.0; }
  double surface_distance(const Vec3& p) const override { return std::abs(signed_distance(p)); }
  bool has_analytic_skeleton() const override { return false; }
  double skeleton_distance(const Vec3&) const override {
    throw Error("fin cylinder has no closed-form skeleton");
  }
  double tessellation_deviation() const override { return 1e-9; }

 private:
  static constexpr double kFinHalfWidth = 0.25;  // radians

  double signed_distance(const Vec3& p) const {
    // 2D signed distance to the section polygon.
    double d2 = std::numeric_limits<double>::infinity();
    bool inside2d = false;
    for (std::size_t i = 0; i < section_.size(); ++i) {
      auto [ax, ay] = section_[i];
      auto [bx, by] = section_[(i + 1) % section_.size()];
      double ex = bx - ax, ey = by - ay;
      double len2 = ex * ex + ey * ey;
      double t = len2 > 0 ? std::clamp(((p.x - ax) * ex + (p.y - ay) * ey) / len2, 0.0, 1.0) : 0.0;
      double dx = p.x - (ax + t * ex), dy = p.y - (ay + t * ey);
      d2 = std::min(d2, std::sqrt(dx * dx + dy * dy));
      if ((ay > p.y) != (by > p.y) && p.x < ax + (p.y - ay) / (by - ay) * ex) inside2d = !inside2d;
    }
    double section = inside2d ? -d2 : d2;
    double axial = std::abs(p.z) - height_ / 2;
    double out = std::hypot(std::max(section, 0.0), std::max(axial, 0.0));
    return out + std::min(std::max(section, axial), 0.0);
  }

  double radius_, height_, fin_height_;
  int res_;
  std::vector<std::pair<double, double>> section_;
};

// --- spec strings -----------------------------------------------------------

std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> params;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InvalidConfig("bad shape parameter '" + item + "'");
    params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return params;
}

double take_double(std::map<std::string, std::string>& params, const std::string& key,
                   double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::size_t used = 0;
  double value = std::stod(it->second, &used);
  if (used != it->second.size()) throw InvalidConfig("bad number for shape key '" + key + "'");
  params.erase(it);
  return value;
}

int take_int(std::map<std::string, std::string>& params, const std::string& key, int fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::size_t used = 0;
  int value = std::stoi(it->second, &used);
  if (used != it->second.size()) throw InvalidConfig("bad integer for shape key '" + key + "'");
  params.erase(it);
  return value;
}

std::pair<int, int> take_res_pair(std::map<std::string, std::string>& params,
                                  std::pair<int, int> fallback) {
  auto it = params.find("res");
  if (it == params.end()) return fallback;
  auto x = it->second.find('x');
  if (x == std::string::npos) throw InvalidConfig("torus res must look like 200x50");
  std::pair<int, int> value{std::stoi(it->second.substr(0, x)),
                            std::stoi(it->second.substr(x + 1))};
  params.erase(it);
  return value;
}

void reject_leftovers(const std::map<std::string, std::string>& params,
                      const std::string& shape) {
  if (!params.empty())
    throw InvalidConfig("unknown key '" + params.begin()->first + "' for shape " + shape);
}

}  // namespace

std::unique_ptr<AnalyticShape> make_sphere(double radius, int subdiv) {
  return std::make_unique<SphereShape>(radius, subdiv);
}
std::unique_ptr<AnalyticShape> make_box(double a, double b, double c) {
  return std::make_unique<BoxShape>(a, b, c);
}
std::unique_ptr<AnalyticShape> make_torus(double major_radius, double minor_radius,
                                          int res_major, int res_minor) {
  return std::make_unique<TorusShape>(major_radius, minor_radius, res_major, res_minor);
}
std::unique_ptr<AnalyticShape> make_capsule(double radius, double height, int res) {
  return std::make_unique<CapsuleShape>(radius, height, res);
}
std::unique_ptr<AnalyticShape> make_fin_cylinder(double radius, double height,
                                                 double fin_height, int res) {
  return std::make_unique<FinCylinderShape>(radius, height, fin_height, res);
}

std::unique_ptr<AnalyticShape> parse_shape_spec(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  auto params = parse_params(colon == std::string::npos ? "" : spec.substr(colon + 1));

  try {
    if (kind == "sphere") {
      double r = take_double(params, "r", 1.0);
      int subdiv = take_int(params, "subdiv", 4);
      reject_leftovers(params, kind);
      return make_sphere(r, subdiv);
    }
    if (kind == "box") {
      double a = take_double(params, "a", 1.0);
      double b = take_double(params, "b", 1.0);
      double c = take_double(params, "c", 1.0);
      reject_leftovers(params, kind);
      return make_box(a, b, c);
    }
    if (kind == "torus") {
      double major = take_double(params, "R", 1.0);
      double minor = take_double(params, "r", 0.3);
      auto [rm, rn] = take_res_pair(params, {200, 50});
      reject_leftovers(params, kind);
      return make_torus(major, minor, rm, rn);
    }
    if (kind == "capsule") {
      double r = take_double(params, "r", 0.3);
      double h = take_double(params, "h", 1.0);
      int res = take_int(params, "res", 64);
      reject_leftovers(params, kind);
      return make_capsule(r, h, res);
    }
    if (kind == "fin_cylinder") {
      double r = take_double(params, "r", 0.4);
      double h = take_double(params, "h", 1.6);
      double fin = take_double(params, "fin", 0.25);
      int res = take_int(params, "res", 192);
      reject_leftovers(params, kind);
      return make_fin_cylinder(r, h, fin, res);
    }
  } catch (const std::invalid_argument&) {
    throw InvalidConfig("unparsable number in shape spec '" + spec + "'");
  } catch (const std::out_of_range&) {
    throw InvalidConfig("number out of range in shape spec '" + spec + "'");
  }
  throw InvalidConfig("unknown shape '" + kind + "'");
}

SkeletonErrorStats analytic_skeleton_error(const AnalyticShape& shape,
                                           const Skeleton& skeleton) {
  if (skeleton.spheres.empty()) throw EmptySkeleton("skeleton has no spheres");
  SkeletonErrorStats stats;
  for (const SkeletalSphere& s : skeleton.spheres) {
    double d = shape.skeleton_distance(s.center);
    stats.mean += d;
    stats.max = std::max(stats.max, d);
  }
  stats.mean /= static_cast<double>(skeleton.spheres.size());
  return stats;
}

}  // namespace mskel
