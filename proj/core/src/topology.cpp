#include <pnsubd/topology.hpp>

#include <algorithm>
#include <string>
#include <unordered_map>

namespace pnsubd {

Topology::Topology(const PNMesh& mesh) : vertex_count_(mesh.positions.size()) {
  const int nv = static_cast<int>(vertex_count_);
  face_offset_.reserve(mesh.faces.size() + 1);
  face_offset_.push_back(0);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    if (face.size() < 3) {
      throw Error(ErrorCode::InvalidArgument, "face " + std::to_string(f) + " has fewer than 3 corners");
    }
    for (std::size_t k = 0; k < face.size(); ++k) {
      const int v = face[k];
      if (v < 0 || v >= nv) {
        throw Error(ErrorCode::IndexOutOfRange, "face " + std::to_string(f) + " references vertex " +
                                                    std::to_string(v));
      }
      if (std::find(face.begin() + static_cast<long>(k) + 1, face.end(), v) != face.end()) {
        throw Error(ErrorCode::InvalidArgument, "face " + std::to_string(f) + " repeats vertex " +
                                                    std::to_string(v));
      }
      he_origin_.push_back(v);
      he_face_.push_back(static_cast<int>(f));
    }
    face_offset_.push_back(static_cast<int>(he_origin_.size()));
  }

  const int nh = static_cast<int>(he_origin_.size());
  he_twin_.assign(static_cast<std::size_t>(nh), -1);
  he_edge_.assign(static_cast<std::size_t>(nh), -1);
  vertex_edges_.resize(vertex_count_);

  // Directed halfedge lookup: (origin, target) -> halfedge.
  std::unordered_map<std::uint64_t, int> directed;
  directed.reserve(static_cast<std::size_t>(nh));
  auto key = [](int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  };
  for (int h = 0; h < nh; ++h) {
    const int a = origin(h);
    const int b = he_origin_[static_cast<std::size_t>(next(h))];
    if (!directed.emplace(key(a, b), h).second) {
      throw Error(ErrorCode::NonManifold, "edge " + std::to_string(a) + "-" + std::to_string(b) +
                                              " is used twice in the same direction");
    }
  }
  for (int h = 0; h < nh; ++h) {
    if (he_edge_[static_cast<std::size_t>(h)] >= 0) continue;
    const int a = origin(h);
    const int b = he_origin_[static_cast<std::size_t>(next(h))];
    const auto it = directed.find(key(b, a));
    const int t = it == directed.end() ? -1 : it->second;
    const int e = static_cast<int>(edges_.size());
    edges_.push_back({a, b, h, t});
    he_edge_[static_cast<std::size_t>(h)] = e;
    if (t >= 0) {
      he_twin_[static_cast<std::size_t>(h)] = t;
      he_twin_[static_cast<std::size_t>(t)] = h;
      he_edge_[static_cast<std::size_t>(t)] = e;
    }
    vertex_edges_[static_cast<std::size_t>(a)].push_back({b, e});
    vertex_edges_[static_cast<std::size_t>(b)].push_back({a, e});
  }

  std::vector<std::vector<int>> outgoing(vertex_count_);
  for (int h = 0; h < nh; ++h) outgoing[static_cast<std::size_t>(origin(h))].push_back(h);

  rings_.resize(vertex_count_);
  for (int v = 0; v < nv; ++v) {
    VertexRing& ring = rings_[static_cast<std::size_t>(v)];
    ring.center = v;
    const auto& out = outgoing[static_cast<std::size_t>(v)];
    if (out.empty()) continue;
    int start = out.front();
    int boundary_starts = 0;
    for (int h : out) {
      if (he_twin_[static_cast<std::size_t>(h)] < 0) {
        if (boundary_starts == 0) start = h;
        ++boundary_starts;
      }
    }
    if (boundary_starts > 1) {
      throw Error(ErrorCode::NonManifold, "vertex " + std::to_string(v) + " joins several face fans");
    }
    ring.boundary = boundary_starts == 1;
    int h = start;
    do {
      ring.outgoing.push_back(h);
      ring.neighbors.push_back(target(h));
      ring.edges.push_back(he_edge_[static_cast<std::size_t>(h)]);
      ring.faces.push_back(he_face_[static_cast<std::size_t>(h)]);
      const int p = prev(h);
      const int t = he_twin_[static_cast<std::size_t>(p)];
      if (t < 0) {
        ring.neighbors.push_back(origin(p));
        ring.edges.push_back(he_edge_[static_cast<std::size_t>(p)]);
        break;
      }
      h = t;
    } while (h != start);
    if (ring.outgoing.size() != out.size()) {
      throw Error(ErrorCode::NonManifold, "vertex " + std::to_string(v) + " joins several face fans");
    }
  }
}

int Topology::next(int h) const {
  const int f = he_face_[static_cast<std::size_t>(h)];
  const int begin = face_offset_[static_cast<std::size_t>(f)];
  const int end = face_offset_[static_cast<std::size_t>(f) + 1];
  return h + 1 == end ? begin : h + 1;
}

int Topology::prev(int h) const {
  const int f = he_face_[static_cast<std::size_t>(h)];
  const int begin = face_offset_[static_cast<std::size_t>(f)];
  const int end = face_offset_[static_cast<std::size_t>(f) + 1];
  return h == begin ? end - 1 : h - 1;
}

int Topology::find_edge(int a, int b) const {
  for (const auto& [n, e] : vertex_edges_[static_cast<std::size_t>(a)]) {
    if (n == b) return e;
  }
  return -1;
}

}  // namespace pnsubd
