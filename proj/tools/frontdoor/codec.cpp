#include "codec.hpp"

#include <sodium.h>

#include <charconv>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace pnsubd::frontdoor {
namespace {

void init_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium failed to initialize");
  });
}

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

}  // namespace

std::string base64_decode(std::string_view text) {
  init_sodium();
  std::vector<unsigned char> out(text.size() / 4 * 3 + 3);
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), " \t\r\n", &len, &end,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "payload is not valid base64");
  }
  return std::string(reinterpret_cast<const char*>(out.data()), len);
}

std::string base64_encode(std::string_view bytes) {
  init_sodium();
  std::string out(sodium_base64_ENCODED_LEN(bytes.size(), sodium_base64_VARIANT_ORIGINAL), '\0');
  sodium_bin2base64(out.data(), out.size(), reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(),
                    sodium_base64_VARIANT_ORIGINAL);
  out.resize(out.size() - 1);
  return out;
}

std::string random_token() {
  init_sodium();
  unsigned char raw[16];
  randombytes_buf(raw, sizeof raw);
  char hex[2 * sizeof raw + 1];
  sodium_bin2hex(hex, sizeof hex, raw, sizeof raw);
  return hex;
}

Json report_to_json(const MeshReport& r) {
  Json valence = Json::object();
  for (const auto& [k, v] : r.valence_histogram) valence[std::to_string(k)] = v;
  Json arity = Json::object();
  for (const auto& [k, v] : r.face_arity_histogram) arity[std::to_string(k)] = v;
  return {{"vertex_count", r.vertex_count},
          {"edge_count", r.edge_count},
          {"face_count", r.face_count},
          {"valence_histogram", valence},
          {"face_arity_histogram", arity},
          {"boundary_edge_count", r.boundary_edge_count},
          {"orientation_consistent", r.orientation_consistent},
          {"manifold", r.manifold},
          {"extraordinary_vertices", r.extraordinary_vertices},
          {"euler_characteristic", r.euler_characteristic},
          {"problems", r.problems}};
}

Json mesh_to_json(const PNMesh& mesh) {
  Json positions = Json::array();
  for (const Vec3& p : mesh.positions) positions.push_back(vec_json(p));
  Json normals = Json::array();
  for (std::size_t i = 0; i < mesh.positions.size(); ++i) {
    normals.push_back(vec_json(i < mesh.normals.size() ? mesh.normals[i] : Vec3::Zero()));
  }
  return {{"positions", positions}, {"normals", normals}, {"faces", mesh.faces}};
}

Json fit_to_json(const PrimitiveFit& fit) {
  Json j = {{"kind", std::string(to_string(fit.kind))},
            {"fitted", fit.fitted},
            {"center", vec_json(fit.params.center)},
            {"max_residual", fit.max_residual},
            {"rms_residual", fit.rms_residual}};
  if (fit.kind != PrimitiveKind::Sphere) j["axis"] = vec_json(fit.params.axis);
  if (fit.kind != PrimitiveKind::Plane) j["radius"] = fit.params.radius;
  if (fit.kind == PrimitiveKind::Torus) j["minor_radius"] = fit.params.minor_radius;
  return j;
}

Json curvature_to_json(const CurvatureField& field) {
  Json gaussian = Json::array();
  Json mean = Json::array();
  for (std::size_t v = 0; v < field.gaussian.size(); ++v) {
    if (field.defined[v]) {
      gaussian.push_back(field.gaussian[v]);
      mean.push_back(field.mean[v]);
    } else {
      gaussian.push_back(nullptr);
      mean.push_back(nullptr);
    }
  }
  return {{"gaussian", gaussian}, {"mean", mean}};
}

Vec3 parse_vec3(std::string_view text) {
  Vec3 v;
  std::size_t pos = 0;
  for (int k = 0; k < 3; ++k) {
    const std::size_t comma = k < 2 ? text.find(',', pos) : text.size();
    if (comma == std::string_view::npos) throw Error(ErrorCode::InvalidArgument, "expected x,y,z");
    const std::string_view tok = text.substr(pos, comma - pos);
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v[k]);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw Error(ErrorCode::InvalidArgument, "bad vector component '" + std::string(tok) + "'");
    }
    pos = comma + 1;
  }
  return v;
}

int exit_code(ErrorCode code) {
  switch (category(code)) {
    case ErrorCategory::Input: return 2;
    case ErrorCategory::Scheme: return 3;
    case ErrorCategory::Numeric: return 4;
  }
  return 1;
}

}  // namespace pnsubd::frontdoor
