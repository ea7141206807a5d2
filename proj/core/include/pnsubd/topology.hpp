#pragma once

// Halfedge adjacency over an immutable PNMesh. A halfedge is a face corner:
// halfedge h of face f runs from corner k to corner k+1.

#include <pnsubd/mesh.hpp>

#include <span>
#include <vector>

namespace pnsubd {

struct Edge {
  int v0 = -1;
  int v1 = -1;
  /// Halfedges using this edge; h1 is -1 on the boundary.
  int h0 = -1;
  int h1 = -1;

  bool boundary() const noexcept { return h1 < 0; }
};

/// The neighbourhood of one vertex in counter-clockwise order.
struct VertexRing {
  int center = -1;
  bool boundary = false;
  /// Outgoing halfedges, ordered so that each face lies between consecutive
  /// entries. Boundary rings start at the outgoing boundary halfedge.
  std::vector<int> outgoing;
  /// Edge neighbours. Boundary rings carry one more neighbour than faces.
  std::vector<int> neighbors;
  std::vector<int> edges;
  std::vector<int> faces;

  int valence() const noexcept { return static_cast<int>(neighbors.size()); }
};

class Topology {
 public:
  /// Throws NonManifold for edges used more than twice, edges used twice in
  /// the same direction, and vertices whose faces form several fans;
  /// InvalidArgument for malformed faces.
  explicit Topology(const PNMesh& mesh);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t face_count() const noexcept { return face_offset_.size() - 1; }
  std::size_t halfedge_count() const noexcept { return he_origin_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  int face_size(int f) const { return face_offset_[f + 1] - face_offset_[f]; }
  int face_halfedge(int f, int k) const { return face_offset_[f] + k; }
  int halfedge_face(int h) const { return he_face_[h]; }
  int origin(int h) const { return he_origin_[h]; }
  int target(int h) const { return he_origin_[next(h)]; }
  int next(int h) const;
  int prev(int h) const;
  int twin(int h) const { return he_twin_[h]; }
  int halfedge_edge(int h) const { return he_edge_[h]; }
  /// Position of halfedge h within its face.
  int corner(int h) const { return h - face_offset_[he_face_[h]]; }

  const Edge& edge(int e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  /// Edge between a and b, or -1.
  int find_edge(int a, int b) const;

  const VertexRing& ring(int v) const { return rings_[v]; }
  bool is_boundary_vertex(int v) const { return rings_[v].boundary; }
  bool is_isolated(int v) const { return rings_[v].outgoing.empty(); }

 private:
  std::size_t vertex_count_ = 0;
  std::vector<int> face_offset_;
  std::vector<int> he_origin_;
  std::vector<int> he_face_;
  std::vector<int> he_twin_;
  std::vector<int> he_edge_;
  std::vector<Edge> edges_;
  std::vector<VertexRing> rings_;
  std::vector<std::vector<std::pair<int, int>>> vertex_edges_;
};

}  // namespace pnsubd
