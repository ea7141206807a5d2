#include <pnsubd/mesh.hpp>
#include <pnsubd/topology.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace pnsubd {

bool PNMesh::has_any_normal() const {
  return std::any_of(normals.begin(), normals.end(), [](const Vec3& n) { return !is_zero(n); });
}

bool PNMesh::all_faces_have_arity(std::size_t arity) const {
  return std::all_of(faces.begin(), faces.end(), [&](const Face& f) { return f.size() == arity; });
}

void PNMesh::ensure_normal_slots() { normals.resize(positions.size(), Vec3::Zero()); }

namespace {

struct EdgeUse {
  int face;
  bool forward;  // stored as (min, max) when true
};

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint32_t>(std::min(a, b));
  const auto hi = static_cast<std::uint32_t>(std::max(a, b));
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

}  // namespace

MeshReport validate(const PNMesh& mesh) {
  MeshReport r;
  const int nv = static_cast<int>(mesh.positions.size());
  r.vertex_count = mesh.positions.size();
  r.face_count = mesh.faces.size();

  if (mesh.normals.size() != mesh.positions.size()) {
    r.problems.push_back("normal count " + std::to_string(mesh.normals.size()) + " differs from vertex count " +
                         std::to_string(mesh.positions.size()));
  } else {
    for (std::size_t i = 0; i < mesh.normals.size(); ++i) {
      const Vec3& n = mesh.normals[i];
      if (!is_zero(n) && std::abs(n.norm() - 1.0) > 1e-12) {
        r.problems.push_back("normal of vertex " + std::to_string(i) + " is not unit");
      }
    }
  }
  for (std::size_t i = 0; i < mesh.positions.size(); ++i) {
    if (!mesh.positions[i].allFinite()) r.problems.push_back("vertex " + std::to_string(i) + " is not finite");
  }

  std::unordered_map<std::uint64_t, std::vector<EdgeUse>> uses;
  std::vector<bool> face_ok(mesh.faces.size(), true);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    r.face_arity_histogram[static_cast<int>(face.size())]++;
    const std::string tag = "face " + std::to_string(f);
    if (face.size() < 3) {
      r.problems.push_back(tag + " has fewer than 3 corners");
      face_ok[f] = false;
      continue;
    }
    if (std::any_of(face.begin(), face.end(), [&](int v) { return v < 0 || v >= nv; })) {
      r.problems.push_back(tag + " references a vertex out of range");
      face_ok[f] = false;
      continue;
    }
    std::unordered_set<int> seen(face.begin(), face.end());
    if (seen.size() != face.size()) {
      r.problems.push_back(tag + " repeats a vertex");
      face_ok[f] = false;
      continue;
    }
    for (std::size_t k = 0; k < face.size(); ++k) {
      const int a = face[k];
      const int b = face[(k + 1) % face.size()];
      uses[edge_key(a, b)].push_back({static_cast<int>(f), a < b});
    }
  }

  r.edge_count = uses.size();
  std::vector<std::vector<std::uint64_t>> vertex_edges(static_cast<std::size_t>(nv));
  std::vector<bool> on_boundary(static_cast<std::size_t>(nv), false);
  for (const auto& [key, list] : uses) {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    vertex_edges[static_cast<std::size_t>(a)].push_back(key);
    vertex_edges[static_cast<std::size_t>(b)].push_back(key);
    if (list.size() == 1) {
      r.boundary_edge_count++;
      on_boundary[static_cast<std::size_t>(a)] = on_boundary[static_cast<std::size_t>(b)] = true;
    } else if (list.size() == 2) {
      if (list[0].forward == list[1].forward) r.orientation_consistent = false;
    } else {
      r.manifold = false;
      on_boundary[static_cast<std::size_t>(a)] = on_boundary[static_cast<std::size_t>(b)] = true;
    }
  }
  if (!r.manifold) r.problems.push_back("some edge is shared by more than two faces");
  if (!r.orientation_consistent) r.problems.push_back("face orientations are inconsistent");

  std::vector<std::vector<int>> vertex_faces(static_cast<std::size_t>(nv));
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (!face_ok[f]) continue;
    for (int v : mesh.faces[f]) vertex_faces[static_cast<std::size_t>(v)].push_back(static_cast<int>(f));
  }

  for (int v = 0; v < nv; ++v) {
    const int valence = static_cast<int>(vertex_edges[static_cast<std::size_t>(v)].size());
    r.valence_histogram[valence]++;
    if (valence == 0 || on_boundary[static_cast<std::size_t>(v)]) continue;
    const auto& fs = vertex_faces[static_cast<std::size_t>(v)];
    const bool quads = std::all_of(fs.begin(), fs.end(), [&](int f) { return mesh.faces[f].size() == 4; });
    const bool tris = std::all_of(fs.begin(), fs.end(), [&](int f) { return mesh.faces[f].size() == 3; });
    if ((quads && valence != 4) || (tris && valence != 6)) r.extraordinary_vertices.push_back(v);
  }

  if (r.manifold && r.orientation_consistent && r.problems.empty()) {
    try {
      Topology topo(mesh);
    } catch (const Error& e) {
      r.manifold = false;
      r.problems.push_back(e.what());
    }
  }

  r.euler_characteristic = static_cast<long>(r.vertex_count) - static_cast<long>(r.edge_count) +
                           static_cast<long>(r.face_count);
  return r;
}

std::string format_report(const MeshReport& r) {
  std::ostringstream out;
  out << "vertices=" << r.vertex_count << '\n'
      << "edges=" << r.edge_count << '\n'
      << "faces=" << r.face_count << '\n'
      << "boundary_edges=" << r.boundary_edge_count << '\n'
      << "orientation_consistent=" << (r.orientation_consistent ? "true" : "false") << '\n'
      << "manifold=" << (r.manifold ? "true" : "false") << '\n'
      << "euler_characteristic=" << r.euler_characteristic << '\n';
  out << "valence_histogram=";
  bool first = true;
  for (const auto& [valence, count] : r.valence_histogram) {
    out << (first ? "" : ",") << valence << ':' << count;
    first = false;
  }
  out << '\n' << "face_arity_histogram=";
  first = true;
  for (const auto& [arity, count] : r.face_arity_histogram) {
    out << (first ? "" : ",") << arity << ':' << count;
    first = false;
  }
  out << '\n' << "extraordinary_vertices=";
  for (std::size_t i = 0; i < r.extraordinary_vertices.size(); ++i) {
    out << (i ? "," : "") << r.extraordinary_vertices[i];
  }
  out << '\n';
  for (const auto& p : r.problems) out << "problem=" << p << '\n';
  return out.str();
}

}  // namespace pnsubd
