#include <pnsubd/obj_io.hpp>

#include "log.hpp"
#include "text_util.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pnsubd {
namespace {

std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

Vec3 parse_xyz(const std::vector<std::string_view>& tok, std::size_t line_no) {
  if (tok.size() < 4) throw Error(ErrorCode::ParseError, at_line(line_no) + "expected 3 coordinates");
  // Extra components (vertex colours, w) are ignored.
  return {detail::parse_double(tok[1], line_no), detail::parse_double(tok[2], line_no),
          detail::parse_double(tok[3], line_no)};
}

int resolve(long raw, std::size_t count, std::size_t line_no) {
  long index = raw > 0 ? raw - 1 : static_cast<long>(count) + raw;
  if (raw == 0 || index < 0 || index >= static_cast<long>(count)) {
    throw Error(ErrorCode::IndexOutOfRange, at_line(line_no) + "index " + std::to_string(raw) +
                                                " out of range (" + std::to_string(count) + " available)");
  }
  return static_cast<int>(index);
}

}  // namespace

PNMesh load_obj(std::istream& in) {
  PNMesh mesh;
  std::vector<Vec3> vn;
  struct Corner {
    long v;
    long n;  // 0 when absent
    std::size_t line;
  };
  std::vector<std::vector<Corner>> raw_faces;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = detail::split_ws(detail::strip_comment(line));
    if (tok.empty()) continue;
    if (tok[0] == "v") {
      mesh.positions.push_back(parse_xyz(tok, line_no));
    } else if (tok[0] == "vn") {
      vn.push_back(parse_xyz(tok, line_no));
    } else if (tok[0] == "f") {
      if (tok.size() < 4) throw Error(ErrorCode::ParseError, at_line(line_no) + "face needs at least 3 corners");
      std::vector<Corner> face;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        const std::string_view c = tok[k];
        const auto s1 = c.find('/');
        Corner corner{detail::parse_long(c.substr(0, s1), line_no), 0, line_no};
        if (s1 != std::string_view::npos) {
          const auto s2 = c.find('/', s1 + 1);
          if (s2 != std::string_view::npos && s2 + 1 < c.size()) {
            corner.n = detail::parse_long(c.substr(s2 + 1), line_no);
          }
        }
        face.push_back(corner);
      }
      raw_faces.push_back(std::move(face));
    } else if (tok[0] == "vt" || tok[0] == "o" || tok[0] == "g" || tok[0] == "s" || tok[0] == "usemtl" ||
               tok[0] == "mtllib") {
      continue;
    } else {
      throw Error(ErrorCode::ParseError, at_line(line_no) + "unsupported record '" + std::string(tok[0]) + "'");
    }
  }

  mesh.ensure_normal_slots();
  std::vector<bool> assigned(mesh.positions.size(), false);
  bool warned = false;
  for (const auto& raw : raw_faces) {
    Face face;
    face.reserve(raw.size());
    for (const Corner& c : raw) {
      const int v = resolve(c.v, mesh.positions.size(), c.line);
      face.push_back(v);
      if (c.n == 0 || assigned[static_cast<std::size_t>(v)]) continue;
      Vec3 n = vn[static_cast<std::size_t>(resolve(c.n, vn.size(), c.line))];
      assigned[static_cast<std::size_t>(v)] = true;
      if (is_zero(n)) continue;
      const double len = n.norm();
      if (std::abs(len - 1.0) > 1e-6 && !warned) {
        detail::logger()->warn("renormalizing non-unit normals (first at line {}, length {})", c.line, len);
        warned = true;
      }
      if (std::abs(len - 1.0) > 1e-14) n /= len;
      mesh.normals[static_cast<std::size_t>(v)] = n;
    }
    mesh.faces.push_back(std::move(face));
  }
  return mesh;
}

PNMesh load_obj_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_obj(in);
}

PNMesh load_obj_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return load_obj(in);
}

void save_obj(const PNMesh& mesh, std::ostream& out) {
  auto vec = [&](const char* tag, const Vec3& p) {
    out << tag << ' ' << detail::format_double(p.x()) << ' ' << detail::format_double(p.y()) << ' '
        << detail::format_double(p.z()) << '\n';
  };
  for (const auto& p : mesh.positions) vec("v", p);
  std::vector<long> normal_id(mesh.positions.size(), 0);
  long next_id = 1;
  for (std::size_t i = 0; i < mesh.normals.size() && i < mesh.positions.size(); ++i) {
    if (is_zero(mesh.normals[i])) continue;
    vec("vn", mesh.normals[i]);
    normal_id[i] = next_id++;
  }
  for (const Face& f : mesh.faces) {
    out << 'f';
    for (int v : f) {
      out << ' ' << v + 1;
      if (const long n = normal_id[static_cast<std::size_t>(v)]; n != 0) out << "//" << n;
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "write failed");
}

std::string save_obj_string(const PNMesh& mesh) {
  std::ostringstream out;
  save_obj(mesh, out);
  return out.str();
}

void save_obj_file(const PNMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  save_obj(mesh, out);
}

}  // namespace pnsubd
