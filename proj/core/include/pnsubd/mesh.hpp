#pragma once

// Indexed polygonal meshes carrying an optional unit normal per vertex.

#include <pnsubd/error.hpp>
#include <pnsubd/types.hpp>

#include <map>
#include <string>
#include <vector>

namespace pnsubd {

using Face = std::vector<int>;

struct PNMesh {
  std::vector<Vec3> positions;
  /// Parallel to positions; the zero vector marks a vertex without a normal.
  std::vector<Vec3> normals;
  std::vector<Face> faces;

  std::size_t vertex_count() const noexcept { return positions.size(); }
  std::size_t face_count() const noexcept { return faces.size(); }
  bool has_any_normal() const;
  /// True when every face has exactly `arity` corners.
  bool all_faces_have_arity(std::size_t arity) const;
  /// Resizes normals to match positions, filling with zero.
  void ensure_normal_slots();
};

struct MeshReport {
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::size_t face_count = 0;
  std::map<int, std::size_t> valence_histogram;
  std::map<int, std::size_t> face_arity_histogram;
  std::size_t boundary_edge_count = 0;
  bool orientation_consistent = true;
  bool manifold = true;
  /// Interior vertices with valence != 4 among quads or != 6 among triangles.
  std::vector<int> extraordinary_vertices;
  long euler_characteristic = 0;
  std::vector<std::string> problems;

  bool valid() const { return problems.empty(); }
};

/// Inspects a mesh without assuming it is well formed. Problems are collected
/// into the report instead of being thrown.
MeshReport validate(const PNMesh& mesh);

/// key=value lines, deterministic order.
std::string format_report(const MeshReport& report);

}  // namespace pnsubd
