#pragma once

// Wavefront OBJ subset: `v`, `vn`, `f` with `a`, `a/t`, `a//n` or `a/t/n`
// corners. Texture coordinates are ignored.

#include <pnsubd/mesh.hpp>

#include <iosfwd>
#include <string>
#include <string_view>

namespace pnsubd {

PNMesh load_obj(std::istream& in);
PNMesh load_obj_string(std::string_view text);
PNMesh load_obj_file(const std::string& path);

/// Positions and normals use 17 significant digits; vertices with a zero
/// normal get no `vn` line and are referenced as plain `a`.
void save_obj(const PNMesh& mesh, std::ostream& out);
std::string save_obj_string(const PNMesh& mesh);
void save_obj_file(const PNMesh& mesh, const std::string& path);

}  // namespace pnsubd
