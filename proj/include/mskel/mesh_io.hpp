#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mskel/mesh.hpp"

namespace mskel {

enum class PlyEncoding { kAscii, kBinaryLittleEndian };

/// Loads an ASCII OBJ or an ASCII/binary PLY, picked by file extension.
/// Degenerate triangles are dropped and counted; vertex indexing is preserved.
TriangleMesh load_mesh(const std::string& path);

/// Writes OBJ (ASCII) or PLY (encoding below) by extension. Positions are
/// written as float64 so a save/load round trip is exact.
void save_mesh(const TriangleMesh& mesh, const std::string& path,
               PlyEncoding encoding = PlyEncoding::kBinaryLittleEndian);

/// Point set with optional named per-point scalar channels (e.g. "radius",
/// "residual", "lfs", "weight"), as carried by the tool's PLY artifacts.
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<std::pair<std::string, std::vector<double>>> channels;

  const std::vector<double>* channel(const std::string& name) const {
    for (const auto& [key, values] : channels)
      if (key == name) return &values;
    return nullptr;
  }
};

/// Reads the vertex element of a PLY (faces, if any, are ignored).
PointCloud load_point_cloud(const std::string& path);

/// Writes points plus channels as float32 vertex properties.
void save_point_cloud(const PointCloud& cloud, const std::string& path,
                      PlyEncoding encoding = PlyEncoding::kBinaryLittleEndian);

}  // namespace mskel
