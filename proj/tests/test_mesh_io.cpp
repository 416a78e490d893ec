#include <doctest.h>

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "mskel/errors.hpp"
#include "mskel/mesh.hpp"
#include "mskel/mesh_io.hpp"
#include "oracles.hpp"

using namespace mskel;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mskel_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

bool same_geometry(const TriangleMesh& a, const TriangleMesh& b) {
  if (a.vertices.size() != b.vertices.size()) return false;
  if (a.triangles.size() != b.triangles.size()) return false;
  for (std::size_t i = 0; i < a.vertices.size(); ++i)
    if (!(a.vertices[i] == b.vertices[i])) return false;
  for (std::size_t i = 0; i < a.triangles.size(); ++i)
    if (a.triangles[i] != b.triangles[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("obj save/load round trip is exact") {
  const TriangleMesh cube = testutil::cube_mesh(0.37, {0.1, -0.2, 0.05});
  const fs::path path = temp_file("cube.obj");
  save_mesh(cube, path.string());
  const TriangleMesh back = load_mesh(path.string());
  CHECK(same_geometry(cube, back));
  CHECK(back.degenerate_dropped == 0);
}

TEST_CASE("ply round trips are exact in both encodings") {
  const TriangleMesh cube = testutil::cube_mesh(1.0 / 3.0);
  for (PlyEncoding enc : {PlyEncoding::kAscii, PlyEncoding::kBinaryLittleEndian}) {
    const fs::path path = temp_file(enc == PlyEncoding::kAscii ? "c_a.ply" : "c_b.ply");
    save_mesh(cube, path.string(), enc);
    CHECK(same_geometry(cube, load_mesh(path.string())));
  }
}

TEST_CASE("obj parser accepts slash-separated corners, negative indices, and quads") {
  const fs::path path = temp_file("hand.obj");
  write_text(path,
             "# comment line\n"
             "v 0 0 0\n"
             "v 1 0 0\n"
             "v 1 1 0\n"
             "v 0 1 0\n"
             "f 1/1/1 2/2/2 3/3/3\n"
             "f -4 -2 -1\n");
  const TriangleMesh mesh = load_mesh(path.string());
  CHECK(mesh.vertex_count() == 4);
  REQUIRE(mesh.triangle_count() == 2);
  CHECK(mesh.triangles[0] == Triangle{0, 1, 2});
  CHECK(mesh.triangles[1] == Triangle{0, 2, 3});

  const fs::path quad = temp_file("quad.obj");
  write_text(quad, "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  const TriangleMesh fanned = load_mesh(quad.string());
  REQUIRE(fanned.triangle_count() == 2);
  CHECK(fanned.triangles[0] == Triangle{0, 1, 2});
  CHECK(fanned.triangles[1] == Triangle{0, 2, 3});
}

TEST_CASE("degenerate triangles are dropped and counted") {
  const fs::path path = temp_file("degen.obj");
  write_text(path,
             "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 2 0 0\n"
             "f 1 2 3\n"
             "f 1 2 4\n"   // collinear: zero area
             "f 1 2 2\n");  // repeated vertex
  const TriangleMesh mesh = load_mesh(path.string());
  CHECK(mesh.triangle_count() == 1);
  CHECK(mesh.degenerate_dropped == 2);
}

TEST_CASE("malformed inputs raise ParseError") {
  const fs::path bad_index = temp_file("bad_index.obj");
  write_text(bad_index, "v 0 0 0\nv 1 0 0\nf 1 2 9\n");
  CHECK_THROWS_AS(load_mesh(bad_index.string()), ParseError);

  const fs::path unknown = temp_file("mesh.stl");
  write_text(unknown, "solid x\n");
  CHECK_THROWS_AS(load_mesh(unknown.string()), ParseError);

  CHECK_THROWS_AS(load_mesh(temp_file("missing.obj").string()), ParseError);

  // Truncated binary PLY: header promises more vertices than the body holds.
  const TriangleMesh cube = testutil::cube_mesh();
  const fs::path full = temp_file("full.ply");
  save_mesh(cube, full.string(), PlyEncoding::kBinaryLittleEndian);
  std::ifstream in(full, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  const fs::path cut = temp_file("cut.ply");
  write_text(cut, bytes.substr(0, bytes.size() - 40));
  CHECK_THROWS_AS(load_mesh(cut.string()), ParseError);
}

TEST_CASE("empty mesh raises EmptyMesh") {
  const fs::path path = temp_file("empty.obj");
  write_text(path, "v 0 0 0\nv 1 0 0\nv 0 1 0\n");
  CHECK_THROWS_AS(load_mesh(path.string()), EmptyMesh);
}

TEST_CASE("big-endian binary ply is byte-swapped on load") {
  // Hand-assembled: one float64 vertex (1.5, -2.0, 0.25) stored big-endian.
  std::string body =
      "ply\nformat binary_big_endian 1.0\n"
      "element vertex 3\n"
      "property double x\nproperty double y\nproperty double z\n"
      "element face 1\n"
      "property list uchar int vertex_indices\n"
      "end_header\n";
  auto push_be = [&body](double value) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(value));
    std::memcpy(&bits, &value, sizeof(bits));
    for (int shift = 56; shift >= 0; shift -= 8)
      body.push_back(static_cast<char>((bits >> shift) & 0xff));
  };
  push_be(1.5); push_be(-2.0); push_be(0.25);
  push_be(0.0); push_be(1.0); push_be(0.0);
  push_be(0.0); push_be(0.0); push_be(1.0);
  body.push_back(3);  // list count
  const char face[12] = {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 2};  // big-endian ints 0,1,2
  body.append(face, face + 12);

  const fs::path path = temp_file("be.ply");
  write_text(path, body);
  const TriangleMesh mesh = load_mesh(path.string());
  REQUIRE(mesh.vertex_count() == 3);
  CHECK(mesh.vertices[0] == Vec3{1.5, -2.0, 0.25});
  REQUIRE(mesh.triangle_count() == 1);
  CHECK(mesh.triangles[0] == Triangle{0, 1, 2});
}

TEST_CASE("watertight report distinguishes closed, open, and non-manifold meshes") {
  const WatertightReport closed = is_watertight(testutil::cube_mesh());
  CHECK(closed.closed);
  CHECK(closed.boundary_edge_count == 0);
  CHECK(closed.non_manifold_edge_count == 0);
  CHECK(closed.inconsistent_winding_edge_count == 0);

  // Removing the two +z triangles exposes the four rim edges.
  const WatertightReport open = is_watertight(testutil::open_cube_mesh());
  CHECK_FALSE(open.closed);
  CHECK(open.boundary_edge_count == 4);

  const WatertightReport shared = is_watertight(testutil::shared_edge_mesh());
  CHECK_FALSE(shared.closed);
  CHECK(shared.non_manifold_edge_count == 1);

  TriangleMesh flipped = testutil::cube_mesh();
  std::swap(flipped.triangles[0][1], flipped.triangles[0][2]);
  const WatertightReport wound = is_watertight(flipped);
  CHECK_FALSE(wound.closed);
  CHECK(wound.inconsistent_winding_edge_count > 0);
}

TEST_CASE("bounding box covers the mesh and honors padding") {
  const TriangleMesh cube = testutil::cube_mesh(0.5, {1.0, 2.0, 3.0});
  const Aabb tight = bounding_box(cube);
  CHECK(tight.lo == Vec3{0.5, 1.5, 2.5});
  CHECK(tight.hi == Vec3{1.5, 2.5, 3.5});
  const Aabb padded = bounding_box(cube, 0.1);
  CHECK(padded.lo.x == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(padded.hi.z == doctest::Approx(3.6).epsilon(1e-12));
}

TEST_CASE("point cloud round trip preserves float32-quantized channels") {
  PointCloud cloud;
  cloud.points = {{0.125, -1.5, 2.0}, {3.25, 0.0, -0.75}};
  cloud.channels.push_back({"radius", {0.5, 1.25}});
  cloud.channels.push_back({"residual", {0.0, 1.0 / 3.0}});

  for (PlyEncoding enc : {PlyEncoding::kAscii, PlyEncoding::kBinaryLittleEndian}) {
    const fs::path path = temp_file(enc == PlyEncoding::kAscii ? "pc_a.ply" : "pc_b.ply");
    save_point_cloud(cloud, path.string(), enc);
    const PointCloud back = load_point_cloud(path.string());
    REQUIRE(back.points.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(back.points[i].x == static_cast<double>(static_cast<float>(cloud.points[i].x)));
      CHECK(back.points[i].y == static_cast<double>(static_cast<float>(cloud.points[i].y)));
      CHECK(back.points[i].z == static_cast<double>(static_cast<float>(cloud.points[i].z)));
    }
    const std::vector<double>* residual = back.channel("residual");
    REQUIRE(residual != nullptr);
    CHECK((*residual)[1] == static_cast<double>(static_cast<float>(1.0 / 3.0)));
    CHECK(back.channel("missing") == nullptr);
  }
}

TEST_CASE("load_point_cloud reads mesh plys and ignores faces") {
  const TriangleMesh cube = testutil::cube_mesh();
  const fs::path path = temp_file("cloud_from_mesh.ply");
  save_mesh(cube, path.string());
  const PointCloud cloud = load_point_cloud(path.string());
  CHECK(cloud.points.size() == cube.vertex_count());
  CHECK(cloud.channels.empty());
}
