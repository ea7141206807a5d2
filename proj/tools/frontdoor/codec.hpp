#pragma once

// Encoding helpers shared by the CLI and the session service.

#include <pnsubd/analysis.hpp>
#include <pnsubd/mesh.hpp>

#include "json.hpp"

#include <string>
#include <string_view>

namespace pnsubd::frontdoor {

using Json = nlohmann::json;

/// Standard base64; whitespace is ignored. Throws ParseError on bad input.
std::string base64_decode(std::string_view text);
std::string base64_encode(std::string_view bytes);

/// 128 random bits as lowercase hex.
std::string random_token();

Json report_to_json(const MeshReport& report);
Json mesh_to_json(const PNMesh& mesh);
Json fit_to_json(const PrimitiveFit& fit);
Json curvature_to_json(const CurvatureField& field);

/// "x,y,z" -> vector. Throws InvalidArgument.
Vec3 parse_vec3(std::string_view text);

/// Process exit code for a kernel error: 2 input, 3 scheme, 4 numeric.
int exit_code(ErrorCode code);

inline constexpr int kExitOk = 0;
inline constexpr int kExitPortInUse = 5;

}  // namespace pnsubd::frontdoor
