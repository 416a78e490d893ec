#include "mskel/mesh_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mskel/errors.hpp"

namespace mskel {

namespace {

std::string lower_ext(const std::string& path) {
  auto pos = path.rfind('.');
  std::string ext = pos == std::string::npos ? "" : path.substr(pos + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------
// OBJ
// ---------------------------------------------------------------------------

std::uint32_t obj_index(long idx, std::size_t vertex_count, const std::string& path) {
  // OBJ indices are 1-based; negative values count back from the end.
  long resolved = idx > 0 ? idx - 1 : static_cast<long>(vertex_count) + idx;
  if (resolved < 0 || resolved >= static_cast<long>(vertex_count))
    throw ParseError(path + ": face index " + std::to_string(idx) + " out of range");
  return static_cast<std::uint32_t>(resolved);
}

TriangleMesh load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  TriangleMesh mesh;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag.empty() || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x >> v.y >> v.z))
        throw ParseError(path + ":" + std::to_string(lineno) + ": bad vertex line");
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<std::uint32_t> poly;
      std::string token;
      while (ls >> token) {
        // "i", "i/j", "i//k", "i/j/k" -- only the vertex index matters here
        std::size_t slash = token.find('/');
        std::string head = slash == std::string::npos ? token : token.substr(0, slash);
        try {
          poly.push_back(obj_index(std::stol(head), mesh.vertices.size(), path));
        } catch (const std::logic_error&) {
          throw ParseError(path + ":" + std::to_string(lineno) + ": bad face token '" + token + "'");
        }
      }
      if (poly.size() < 3)
        throw ParseError(path + ":" + std::to_string(lineno) + ": face with fewer than 3 vertices");
      for (std::size_t i = 2; i < poly.size(); ++i)
        mesh.triangles.push_back({poly[0], poly[i - 1], poly[i]});
    }
    // all other tags (vn, vt, o, g, s, usemtl, mtllib, ...) are ignored
  }
  return mesh;
}

void save_obj(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  char buf[128];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
    out << buf;
  }
  for (const Triangle& t : mesh.triangles)
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  if (!out) throw ParseError("write failed for " + path);
}

// ---------------------------------------------------------------------------
// PLY
// ---------------------------------------------------------------------------

enum class PlyType { kInt8, kUInt8, kInt16, kUInt16, kInt32, kUInt32, kFloat32, kFloat64 };

std::size_t ply_type_size(PlyType t) {
  switch (t) {
    case PlyType::kInt8:
    case PlyType::kUInt8: return 1;
    case PlyType::kInt16:
    case PlyType::kUInt16: return 2;
    case PlyType::kInt32:
    case PlyType::kUInt32:
    case PlyType::kFloat32: return 4;
    case PlyType::kFloat64: return 8;
  }
  return 0;
}

PlyType parse_ply_type(const std::string& name, const std::string& path) {
  if (name == "char" || name == "int8") return PlyType::kInt8;
  if (name == "uchar" || name == "uint8") return PlyType::kUInt8;
  if (name == "short" || name == "int16") return PlyType::kInt16;
  if (name == "ushort" || name == "uint16") return PlyType::kUInt16;
  if (name == "int" || name == "int32") return PlyType::kInt32;
  if (name == "uint" || name == "uint32") return PlyType::kUInt32;
  if (name == "float" || name == "float32") return PlyType::kFloat32;
  if (name == "double" || name == "float64") return PlyType::kFloat64;
  throw ParseError(path + ": unknown ply type '" + name + "'");
}

struct PlyProperty {
  std::string name;
  bool is_list = false;
  PlyType count_type = PlyType::kUInt8;
  PlyType type = PlyType::kFloat32;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

struct PlyHeader {
  bool binary = false;
  bool big_endian = false;
  std::vector<PlyElement> elements;
  std::size_t data_offset = 0;
};

PlyHeader parse_ply_header(const std::string& data, const std::string& path) {
  PlyHeader header;
  std::size_t pos = 0;
  auto next_line = [&]() -> std::string {
    if (pos >= data.size()) throw ParseError(path + ": truncated ply header");
    std::size_t eol = data.find('\n', pos);
    if (eol == std::string::npos) eol = data.size();
    std::string line = data.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  if (next_line() != "ply") throw ParseError(path + ": missing ply magic");
  bool have_format = false;
  for (;;) {
    std::istringstream ls(next_line());
    std::string tag;
    ls >> tag;
    if (tag == "comment" || tag == "obj_info" || tag.empty()) continue;
    if (tag == "format") {
      std::string fmt, version;
      ls >> fmt >> version;
      if (fmt == "ascii") {
        header.binary = false;
      } else if (fmt == "binary_little_endian") {
        header.binary = true;
      } else if (fmt == "binary_big_endian") {
        header.binary = true;
        header.big_endian = true;
      } else {
        throw ParseError(path + ": unsupported ply format '" + fmt + "'");
      }
      have_format = true;
    } else if (tag == "element") {
      PlyElement elem;
      if (!(ls >> elem.name >> elem.count))
        throw ParseError(path + ": bad element line");
      header.elements.push_back(elem);
    } else if (tag == "property") {
      if (header.elements.empty())
        throw ParseError(path + ": property before element");
      PlyProperty prop;
      std::string first;
      ls >> first;
      if (first == "list") {
        std::string count_t, elem_t;
        if (!(ls >> count_t >> elem_t >> prop.name))
          throw ParseError(path + ": bad list property line");
        prop.is_list = true;
        prop.count_type = parse_ply_type(count_t, path);
        prop.type = parse_ply_type(elem_t, path);
      } else {
        prop.type = parse_ply_type(first, path);
        if (!(ls >> prop.name)) throw ParseError(path + ": bad property line");
      }
      header.elements.back().properties.push_back(prop);
    } else if (tag == "end_header") {
      break;
    } else {
      throw ParseError(path + ": unexpected header line '" + tag + "'");
    }
  }
  if (!have_format) throw ParseError(path + ": ply header has no format line");
  header.data_offset = pos;
  return header;
}

template <typename U>
U byteswap_int(U value) {
  U out = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out = static_cast<U>(out << 8) | static_cast<U>(value & 0xff);
    value = static_cast<U>(value >> 8);
  }
  return out;
}

class BinaryCursor {
 public:
  BinaryCursor(const std::string& data, std::size_t offset, bool big_endian,
               const std::string& path)
      : data_(data), pos_(offset), big_endian_(big_endian), path_(path) {}

  double read(PlyType t) {
    switch (t) {
      case PlyType::kInt8: return static_cast<double>(static_cast<std::int8_t>(read_raw<std::uint8_t>()));
      case PlyType::kUInt8: return static_cast<double>(read_raw<std::uint8_t>());
      case PlyType::kInt16: return static_cast<double>(static_cast<std::int16_t>(read_raw<std::uint16_t>()));
      case PlyType::kUInt16: return static_cast<double>(read_raw<std::uint16_t>());
      case PlyType::kInt32: return static_cast<double>(static_cast<std::int32_t>(read_raw<std::uint32_t>()));
      case PlyType::kUInt32: return static_cast<double>(read_raw<std::uint32_t>());
      case PlyType::kFloat32: return static_cast<double>(std::bit_cast<float>(read_raw<std::uint32_t>()));
      case PlyType::kFloat64: return std::bit_cast<double>(read_raw<std::uint64_t>());
    }
    return 0.0;
  }

 private:
  template <typename U>
  U read_raw() {
    if (pos_ + sizeof(U) > data_.size())
      throw ParseError(path_ + ": truncated ply data");
    U value;
    std::memcpy(&value, data_.data() + pos_, sizeof(U));
    pos_ += sizeof(U);
    if (big_endian_ && sizeof(U) > 1) value = byteswap_int(value);
    return value;
  }

  const std::string& data_;
  std::size_t pos_;
  bool big_endian_;
  const std::string& path_;
};

class AsciiCursor {
 public:
  AsciiCursor(const std::string& data, std::size_t offset, const std::string& path)
      : stream_(data.substr(offset)), path_(path) {}

  double read(PlyType t) {
    double v;
    if (!(stream_ >> v)) throw ParseError(path_ + ": truncated ply data");
    // A float32 property carries float32 precision regardless of encoding;
    // quantize so ascii and binary files round-trip to identical values.
    if (t == PlyType::kFloat32) return static_cast<double>(static_cast<float>(v));
    return v;
  }

 private:
  std::istringstream stream_;
  const std::string& path_;
};

struct PlyContents {
  std::vector<Vec3> points;
  std::vector<std::pair<std::string, std::vector<double>>> channels;
  std::vector<Triangle> triangles;
};

template <typename Cursor>
void read_ply_data(const PlyHeader& header, Cursor& cur, PlyContents& out,
                   const std::string& path) {
  for (const PlyElement& elem : header.elements) {
    if (elem.name == "vertex") {
      int xi = -1, yi = -1, zi = -1;
      std::vector<int> channel_of(elem.properties.size(), -1);
      for (std::size_t p = 0; p < elem.properties.size(); ++p) {
        const PlyProperty& prop = elem.properties[p];
        if (prop.is_list)
          throw ParseError(path + ": list property on vertex element");
        if (prop.name == "x") xi = static_cast<int>(p);
        else if (prop.name == "y") yi = static_cast<int>(p);
        else if (prop.name == "z") zi = static_cast<int>(p);
        else if (prop.type == PlyType::kFloat32 || prop.type == PlyType::kFloat64) {
          channel_of[p] = static_cast<int>(out.channels.size());
          out.channels.emplace_back(prop.name, std::vector<double>{});
          out.channels.back().second.reserve(elem.count);
        }
      }
      if (xi < 0 || yi < 0 || zi < 0)
        throw ParseError(path + ": vertex element lacks x/y/z");
      out.points.reserve(elem.count);
      std::vector<double> row(elem.properties.size());
      for (std::size_t i = 0; i < elem.count; ++i) {
        for (std::size_t p = 0; p < elem.properties.size(); ++p)
          row[p] = cur.read(elem.properties[p].type);
        out.points.push_back({row[xi], row[yi], row[zi]});
        for (std::size_t p = 0; p < elem.properties.size(); ++p)
          if (channel_of[p] >= 0) out.channels[channel_of[p]].second.push_back(row[p]);
      }
    } else if (elem.name == "face") {
      for (std::size_t i = 0; i < elem.count; ++i) {
        for (const PlyProperty& prop : elem.properties) {
          if (!prop.is_list) {
            cur.read(prop.type);
            continue;
          }
          std::size_t n = static_cast<std::size_t>(cur.read(prop.count_type));
          bool is_indices = prop.name == "vertex_indices" || prop.name == "vertex_index";
          std::vector<std::uint32_t> poly;
          for (std::size_t j = 0; j < n; ++j) {
            double v = cur.read(prop.type);
            if (is_indices) {
              if (v < 0) throw ParseError(path + ": negative face index");
              poly.push_back(static_cast<std::uint32_t>(v));
            }
          }
          if (is_indices) {
            if (poly.size() < 3) throw ParseError(path + ": face with fewer than 3 vertices");
            for (std::size_t j = 2; j < poly.size(); ++j)
              out.triangles.push_back({poly[0], poly[j - 1], poly[j]});
          }
        }
      }
    } else {
      // skip unknown elements property by property
      for (std::size_t i = 0; i < elem.count; ++i) {
        for (const PlyProperty& prop : elem.properties) {
          if (prop.is_list) {
            std::size_t n = static_cast<std::size_t>(cur.read(prop.count_type));
            for (std::size_t j = 0; j < n; ++j) cur.read(prop.type);
          } else {
            cur.read(prop.type);
          }
        }
      }
    }
  }
}

PlyContents load_ply(const std::string& path) {
  std::string data = read_file(path);
  PlyHeader header = parse_ply_header(data, path);
  PlyContents contents;
  if (header.binary) {
    BinaryCursor cur(data, header.data_offset, header.big_endian, path);
    read_ply_data(header, cur, contents, path);
  } else {
    AsciiCursor cur(data, header.data_offset, path);
    read_ply_data(header, cur, contents, path);
  }
  return contents;
}

void append_le(std::string& out, const void* src, std::size_t n) {
  // host is little-endian on every platform this builds for
  static_assert(std::endian::native == std::endian::little);
  out.append(static_cast<const char*>(src), n);
}

}  // namespace

TriangleMesh load_mesh(const std::string& path) {
  std::string ext = lower_ext(path);
  TriangleMesh mesh;
  if (ext == "obj") {
    mesh = load_obj(path);
  } else if (ext == "ply") {
    PlyContents contents = load_ply(path);
    mesh.vertices = std::move(contents.points);
    mesh.triangles = std::move(contents.triangles);
  } else {
    throw ParseError(path + ": unsupported mesh extension '" + ext + "'");
  }
  validate_mesh(mesh);
  return mesh;
}

void save_mesh(const TriangleMesh& mesh, const std::string& path, PlyEncoding encoding) {
  std::string ext = lower_ext(path);
  if (ext == "obj") {
    save_obj(mesh, path);
    return;
  }
  if (ext != "ply") throw ParseError(path + ": unsupported mesh extension '" + ext + "'");

  std::ostringstream header;
  header << "ply\nformat "
         << (encoding == PlyEncoding::kAscii ? "ascii" : "binary_little_endian")
         << " 1.0\n"
         << "element vertex " << mesh.vertices.size() << "\n"
         << "property double x\nproperty double y\nproperty double z\n"
         << "element face " << mesh.triangles.size() << "\n"
         << "property list uchar int vertex_indices\n"
         << "end_header\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << header.str();
  if (encoding == PlyEncoding::kAscii) {
    char buf[160];
    for (const Vec3& v : mesh.vertices) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", v.x, v.y, v.z);
      out << buf;
    }
    for (const Triangle& t : mesh.triangles)
      out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  } else {
    std::string body;
    body.reserve(mesh.vertices.size() * 24 + mesh.triangles.size() * 13);
    for (const Vec3& v : mesh.vertices) append_le(body, &v, 24);
    for (const Triangle& t : mesh.triangles) {
      std::uint8_t n = 3;
      append_le(body, &n, 1);
      std::int32_t idx[3] = {static_cast<std::int32_t>(t[0]),
                             static_cast<std::int32_t>(t[1]),
                             static_cast<std::int32_t>(t[2])};
      append_le(body, idx, 12);
    }
    out << body;
  }
  if (!out) throw ParseError("write failed for " + path);
}

PointCloud load_point_cloud(const std::string& path) {
  if (lower_ext(path) != "ply")
    throw ParseError(path + ": point clouds are read from ply files");
  PlyContents contents = load_ply(path);
  if (contents.points.empty()) throw ParseError(path + ": no points");
  PointCloud cloud;
  cloud.points = std::move(contents.points);
  cloud.channels = std::move(contents.channels);
  return cloud;
}

void save_point_cloud(const PointCloud& cloud, const std::string& path, PlyEncoding encoding) {
  for (const auto& [name, values] : cloud.channels)
    if (values.size() != cloud.points.size())
      throw LengthMismatch("channel '" + name + "' length mismatch");

  std::ostringstream header;
  header << "ply\nformat "
         << (encoding == PlyEncoding::kAscii ? "ascii" : "binary_little_endian")
         << " 1.0\n"
         << "element vertex " << cloud.points.size() << "\n"
         << "property float x\nproperty float y\nproperty float z\n";
  for (const auto& [name, values] : cloud.channels)
    header << "property float " << name << "\n";
  header << "end_header\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << header.str();
  char buf[64];
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    float row[3] = {static_cast<float>(cloud.points[i].x),
                    static_cast<float>(cloud.points[i].y),
                    static_cast<float>(cloud.points[i].z)};
    if (encoding == PlyEncoding::kAscii) {
      std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g", row[0], row[1], row[2]);
      out << buf;
      for (const auto& [name, values] : cloud.channels) {
        std::snprintf(buf, sizeof(buf), " %.9g", static_cast<float>(values[i]));
        out << buf;
      }
      out << '\n';
    } else {
      std::string body;
      append_le(body, row, 12);
      for (const auto& [name, values] : cloud.channels) {
        float f = static_cast<float>(values[i]);
        append_le(body, &f, 4);
      }
      out << body;
    }
  }
  if (!out) throw ParseError("write failed for " + path);
}

}  // namespace mskel
