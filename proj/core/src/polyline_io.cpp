#include <pnsubd/polyline_io.hpp>

#include "text_util.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace pnsubd {
namespace {

Vec3 parse_vec(const std::vector<std::string_view>& tok, std::size_t line_no) {
  if (tok.size() != 4 && tok.size() != 3) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 2 or 3 coordinates");
  }
  Vec3 v = Vec3::Zero();
  for (std::size_t k = 1; k < tok.size(); ++k) v[static_cast<int>(k - 1)] = detail::parse_double(tok[k], line_no);
  return v;
}

}  // namespace

PNPolygon load_polyline(std::istream& in) {
  PNPolygon poly;
  bool have_header = false;
  bool normal_attached = true;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = detail::split_ws(detail::strip_comment(line));
    if (tok.empty()) continue;
    if (tok[0] == "closed:") {
      if (tok.size() != 2 || (tok[1] != "true" && tok[1] != "false")) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": closed: expects true or false");
      }
      poly.closed = tok[1] == "true";
      have_header = true;
    } else if (tok[0] == "v") {
      poly.vertices.push_back({parse_vec(tok, line_no), Vec3::Zero()});
      normal_attached = false;
    } else if (tok[0] == "vn") {
      if (poly.vertices.empty() || normal_attached) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": vn without a preceding v");
      }
      Vec3 n = parse_vec(tok, line_no);
      // Already-unit normals are kept verbatim so files round-trip bit-exactly.
      if (!is_zero(n) && std::abs(n.norm() - 1.0) > 1e-14) n.normalize();
      poly.vertices.back().normal = n;
      normal_attached = true;
    } else {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (!have_header) throw Error(ErrorCode::ParseError, "missing 'closed:' header");
  return poly;
}

PNPolygon load_polyline_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return load_polyline(in);
}

void save_polyline(const PNPolygon& poly, std::ostream& out) {
  out << "closed: " << (poly.closed ? "true" : "false") << '\n';
  for (const auto& v : poly.vertices) {
    out << "v " << detail::format_double(v.position.x()) << ' ' << detail::format_double(v.position.y()) << ' '
        << detail::format_double(v.position.z()) << '\n';
    if (v.has_normal()) {
      out << "vn " << detail::format_double(v.normal.x()) << ' ' << detail::format_double(v.normal.y()) << ' '
          << detail::format_double(v.normal.z()) << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::Io, "write failed");
}

void save_polyline_file(const PNPolygon& poly, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  save_polyline(poly, out);
}

}  // namespace pnsubd
