#include <pnsubd/curve.hpp>
#include <pnsubd/schemes.hpp>
#include <pnsubd/topology.hpp>

#include "log.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace pnsubd {

SchemeKind parse_scheme(std::string_view name) {
  if (name == "cc" || name == "catmull-clark" || name == "catmull_clark") return SchemeKind::CatmullClark;
  if (name == "ds" || name == "doo-sabin" || name == "doo_sabin") return SchemeKind::DooSabin;
  if (name == "loop") return SchemeKind::Loop;
  if (name == "kobbelt") return SchemeKind::Kobbelt;
  if (name == "butterfly") return SchemeKind::Butterfly;
  throw Error(ErrorCode::UnknownScheme, "unknown surface scheme '" + std::string(name) + "'");
}

std::string_view scheme_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::CatmullClark: return "cc";
    case SchemeKind::DooSabin: return "ds";
    case SchemeKind::Loop: return "loop";
    case SchemeKind::Kobbelt: return "kobbelt";
    case SchemeKind::Butterfly: return "butterfly";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "linear") return Variant::Linear;
  if (name == "pn") return Variant::PN;
  if (name == "modified") return Variant::Modified;
  if (name == "pn-modified" || name == "pn_modified") return Variant::PNModified;
  throw Error(ErrorCode::UnsupportedVariant, "unknown variant '" + std::string(name) + "'");
}

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::Linear: return "linear";
    case Variant::PN: return "pn";
    case Variant::Modified: return "modified";
    case Variant::PNModified: return "pn-modified";
  }
  return "?";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::VertexPoint: return "vertex-point";
    case Provenance::EdgePoint: return "edge-point";
    case Provenance::FacePoint: return "face-point";
    case Provenance::DualPoint: return "dual-point";
    case Provenance::Interpolated: return "interpolated";
  }
  return "?";
}

namespace {

void require_arity(const PNMesh& mesh, std::size_t arity, std::string_view scheme) {
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (mesh.faces[f].size() != arity) {
      throw Error(ErrorCode::WrongFaceArity, std::string(scheme) + " needs faces with " + std::to_string(arity) +
                                                 " corners; face " + std::to_string(f) + " has " +
                                                 std::to_string(mesh.faces[f].size()));
    }
  }
}

Stencil identity(int v) { return {{v, 1.0}}; }

Stencil face_centroid(const PNMesh& mesh, int f) {
  StencilBuilder b;
  const Face& face = mesh.faces[static_cast<std::size_t>(f)];
  for (int v : face) b.add(v, 1.0 / static_cast<double>(face.size()));
  return std::move(b).build();
}

/// Boundary neighbours of a boundary vertex (first and last ring entries).
std::pair<int, int> boundary_neighbors(const VertexRing& ring) {
  return {ring.neighbors.front(), ring.neighbors.back()};
}

/// Quads from splitting every face around its face point (Catmull-Clark, Kobbelt).
std::vector<Face> primal_quads(const PNMesh& mesh, const Topology& topo) {
  const int nv = static_cast<int>(mesh.vertex_count());
  const int ne = static_cast<int>(topo.edge_count());
  std::vector<Face> out;
  for (int f = 0; f < static_cast<int>(mesh.face_count()); ++f) {
    const int n = topo.face_size(f);
    for (int k = 0; k < n; ++k) {
      const int h = topo.face_halfedge(f, k);
      const int hp = topo.prev(h);
      out.push_back({topo.origin(h), nv + topo.halfedge_edge(h), nv + ne + f, nv + topo.halfedge_edge(hp)});
    }
  }
  return out;
}

/// Each triangle into four (Loop, Butterfly).
std::vector<Face> primal_triangles(const PNMesh& mesh, const Topology& topo) {
  const int nv = static_cast<int>(mesh.vertex_count());
  std::vector<Face> out;
  for (int f = 0; f < static_cast<int>(mesh.face_count()); ++f) {
    const int h0 = topo.face_halfedge(f, 0);
    const int h1 = topo.next(h0);
    const int h2 = topo.next(h1);
    const int e0 = nv + topo.halfedge_edge(h0);
    const int e1 = nv + topo.halfedge_edge(h1);
    const int e2 = nv + topo.halfedge_edge(h2);
    out.push_back({topo.origin(h0), e0, e2});
    out.push_back({topo.origin(h1), e1, e0});
    out.push_back({topo.origin(h2), e2, e1});
    out.push_back({e0, e1, e2});
  }
  return out;
}

void add_vertex_provenance(StencilSet& s, std::size_t nv, Provenance kind) {
  for (std::size_t v = 0; v < nv; ++v) s.provenance.push_back({kind, static_cast<int>(v), -1});
}

}  // namespace

StencilSet stencils_catmull_clark(const PNMesh& mesh) {
  const Topology topo(mesh);
  const int nv = static_cast<int>(mesh.vertex_count());
  const int ne = static_cast<int>(topo.edge_count());
  const int nf = static_cast<int>(mesh.face_count());

  std::vector<Stencil> face_points(static_cast<std::size_t>(nf));
  for (int f = 0; f < nf; ++f) face_points[static_cast<std::size_t>(f)] = face_centroid(mesh, f);

  StencilSet s;
  s.stencils.reserve(static_cast<std::size_t>(nv + ne + nf));
  for (int v = 0; v < nv; ++v) {
    const VertexRing& ring = topo.ring(v);
    if (ring.outgoing.empty()) {
      s.stencils.push_back(identity(v));
      continue;
    }
    StencilBuilder b;
    if (ring.boundary) {
      const auto [l, r] = boundary_neighbors(ring);
      b.add(v, 0.75).add(l, 0.125).add(r, 0.125);
    } else {
      const double n = static_cast<double>(ring.valence());
      // (Q + 2R + (n-3)S) / n with Q, R averages over n faces and n edge midpoints.
      for (int f : ring.faces) b.add(face_points[static_cast<std::size_t>(f)], 1.0 / (n * n));
      for (int u : ring.neighbors) b.add(v, 1.0 / (n * n)).add(u, 1.0 / (n * n));
      b.add(v, (n - 3.0) / n);
    }
    s.stencils.push_back(std::move(b).build());
  }
  for (int e = 0; e < ne; ++e) {
    const Edge& edge = topo.edge(e);
    StencilBuilder b;
    if (edge.boundary()) {
      b.add(edge.v0, 0.5).add(edge.v1, 0.5);
    } else {
      b.add(edge.v0, 0.25).add(edge.v1, 0.25);
      b.add(face_points[static_cast<std::size_t>(topo.halfedge_face(edge.h0))], 0.25);
      b.add(face_points[static_cast<std::size_t>(topo.halfedge_face(edge.h1))], 0.25);
    }
    s.stencils.push_back(std::move(b).build());
  }
  for (auto& fp : face_points) s.stencils.push_back(std::move(fp));

  add_vertex_provenance(s, mesh.vertex_count(), Provenance::VertexPoint);
  for (int e = 0; e < ne; ++e) s.provenance.push_back({Provenance::EdgePoint, e, -1});
  for (int f = 0; f < nf; ++f) s.provenance.push_back({Provenance::FacePoint, f, -1});
  s.new_faces = primal_quads(mesh, topo);
  s.new_vertex_count = s.stencils.size();
  return s;
}

StencilSet stencils_doo_sabin(const PNMesh& mesh) {
  const Topology topo(mesh);
  StencilSet s;
  const int nf = static_cast<int>(mesh.face_count());
  for (int f = 0; f < nf; ++f) {
    const int n = topo.face_size(f);
    const double dn = static_cast<double>(n);
    for (int i = 0; i < n; ++i) {
      StencilBuilder b;
      for (int j = 0; j < n; ++j) {
        const double w = i == j ? (dn + 5.0) / (4.0 * dn)
                                : (3.0 + 2.0 * std::cos(2.0 * std::numbers::pi * (i - j) / dn)) / (4.0 * dn);
        b.add(topo.origin(topo.face_halfedge(f, j)), w);
      }
      s.stencils.push_back(std::move(b).build());
      s.provenance.push_back({Provenance::DualPoint, f, i});
    }
  }
  // Face-faces, then edge-faces across interior edges, then vertex-faces
  // around interior vertices; dual elements touching the boundary are dropped.
  for (int f = 0; f < nf; ++f) {
    Face face;
    for (int k = 0; k < topo.face_size(f); ++k) face.push_back(topo.face_halfedge(f, k));
    s.new_faces.push_back(std::move(face));
  }
  for (const Edge& e : topo.edges()) {
    if (e.boundary()) continue;
    s.new_faces.push_back({topo.next(e.h0), e.h0, topo.next(e.h1), e.h1});
  }
  for (int v = 0; v < static_cast<int>(mesh.vertex_count()); ++v) {
    const VertexRing& ring = topo.ring(v);
    if (ring.boundary || ring.outgoing.size() < 3) continue;
    s.new_faces.emplace_back(ring.outgoing.begin(), ring.outgoing.end());
  }
  s.new_vertex_count = s.stencils.size();
  return s;
}

StencilSet stencils_loop(const PNMesh& mesh) {
  require_arity(mesh, 3, "loop");
  const Topology topo(mesh);
  const int nv = static_cast<int>(mesh.vertex_count());
  StencilSet s;
  for (int v = 0; v < nv; ++v) {
    const VertexRing& ring = topo.ring(v);
    if (ring.outgoing.empty()) {
      s.stencils.push_back(identity(v));
      continue;
    }
    StencilBuilder b;
    if (ring.boundary) {
      const auto [l, r] = boundary_neighbors(ring);
      b.add(v, 0.75).add(l, 0.125).add(r, 0.125);
    } else {
      const double n = static_cast<double>(ring.valence());
      const double c = 0.375 + 0.25 * std::cos(2.0 * std::numbers::pi / n);
      const double beta = (0.625 - c * c) / n;
      b.add(v, 1.0 - n * beta);
      for (int u : ring.neighbors) b.add(u, beta);
    }
    s.stencils.push_back(std::move(b).build());
  }
  for (const Edge& e : topo.edges()) {
    StencilBuilder b;
    if (e.boundary()) {
      b.add(e.v0, 0.5).add(e.v1, 0.5);
    } else {
      b.add(e.v0, 0.375).add(e.v1, 0.375);
      b.add(topo.target(topo.next(e.h0)), 0.125).add(topo.target(topo.next(e.h1)), 0.125);
    }
    s.stencils.push_back(std::move(b).build());
  }
  add_vertex_provenance(s, mesh.vertex_count(), Provenance::VertexPoint);
  for (int e = 0; e < static_cast<int>(topo.edge_count()); ++e) s.provenance.push_back({Provenance::EdgePoint, e, -1});
  s.new_faces = primal_triangles(mesh, topo);
  s.new_vertex_count = s.stencils.size();
  return s;
}

namespace {

/// The neighbour continuing the straight grid line b -> a beyond a, if a is
/// a regular interior (valence 4) or regular boundary (valence 3) vertex.
std::optional<int> grid_opposite(const Topology& topo, int a, int b) {
  const VertexRing& ring = topo.ring(a);
  const auto& nb = ring.neighbors;
  const int k = static_cast<int>(nb.size());
  int i = -1;
  for (int j = 0; j < k; ++j) {
    if (nb[static_cast<std::size_t>(j)] == b) i = j;
  }
  if (i < 0) return std::nullopt;
  if (!ring.boundary && k == 4) return nb[static_cast<std::size_t>((i + 2) % 4)];
  if (ring.boundary && k == 3) {
    if (i == 0) return nb[2];
    if (i == 2) return nb[0];
  }
  return std::nullopt;
}

/// Midpoint rule along a line of four samples o, a, b, p; missing outer
/// samples are replaced by quadratic extrapolation.
Stencil four_point(const Stencil& a, const Stencil& b, const Stencil* o, const Stencil* p) {
  StencilBuilder s;
  if (o && p) {
    s.add(*o, -1.0 / 16).add(a, 9.0 / 16).add(b, 9.0 / 16).add(*p, -1.0 / 16);
  } else if (p) {
    s.add(a, 3.0 / 8).add(b, 3.0 / 4).add(*p, -1.0 / 8);
  } else if (o) {
    s.add(b, 3.0 / 8).add(a, 3.0 / 4).add(*o, -1.0 / 8);
  } else {
    s.add(a, 0.5).add(b, 0.5);
  }
  return std::move(s).build();
}

/// The edge of the quad across `h`'s edge that is opposite to it, or -1.
int edge_beyond(const Topology& topo, int h) {
  const int t = topo.twin(h);
  if (t < 0) return -1;
  return topo.halfedge_edge(topo.next(topo.next(t)));
}

}  // namespace

StencilSet stencils_kobbelt(const PNMesh& mesh) {
  require_arity(mesh, 4, "kobbelt");
  const Topology topo(mesh);
  const int nv = static_cast<int>(mesh.vertex_count());
  const int ne = static_cast<int>(topo.edge_count());
  const int nf = static_cast<int>(mesh.face_count());

  StencilSet s;
  for (int v = 0; v < nv; ++v) s.stencils.push_back(identity(v));

  std::vector<Stencil> edge_points;
  edge_points.reserve(static_cast<std::size_t>(ne));
  for (const Edge& e : topo.edges()) {
    const Stencil a = identity(e.v0);
    const Stencil b = identity(e.v1);
    const auto oa = grid_opposite(topo, e.v0, e.v1);
    const auto ob = grid_opposite(topo, e.v1, e.v0);
    const Stencil so = oa ? identity(*oa) : Stencil{};
    const Stencil sp = ob ? identity(*ob) : Stencil{};
    edge_points.push_back(four_point(a, b, oa ? &so : nullptr, ob ? &sp : nullptr));
  }
  for (const auto& ep : edge_points) s.stencils.push_back(ep);

  for (int f = 0; f < nf; ++f) {
    StencilBuilder b;
    for (int dir = 0; dir < 2; ++dir) {
      const int h_near = topo.face_halfedge(f, dir);
      const int h_far = topo.next(topo.next(h_near));
      const int e_near = topo.halfedge_edge(h_near);
      const int e_far = topo.halfedge_edge(h_far);
      const int e_before = edge_beyond(topo, h_near);
      const int e_after = edge_beyond(topo, h_far);
      const Stencil* o = e_before >= 0 ? &edge_points[static_cast<std::size_t>(e_before)] : nullptr;
      const Stencil* p = e_after >= 0 ? &edge_points[static_cast<std::size_t>(e_after)] : nullptr;
      b.add(four_point(edge_points[static_cast<std::size_t>(e_near)], edge_points[static_cast<std::size_t>(e_far)], o, p),
            0.5);
    }
    s.stencils.push_back(std::move(b).build());
  }

  add_vertex_provenance(s, mesh.vertex_count(), Provenance::Interpolated);
  for (int e = 0; e < ne; ++e) s.provenance.push_back({Provenance::EdgePoint, e, -1});
  for (int f = 0; f < nf; ++f) s.provenance.push_back({Provenance::FacePoint, f, -1});
  s.new_faces = primal_quads(mesh, topo);
  s.new_vertex_count = s.stencils.size();
  return s;
}

namespace {

/// Wing vertex across the edge of `h` (opposite to the third corner of h's
/// triangle); missing wings are reflected through the edge midpoint.
Stencil butterfly_wing(const Topology& topo, int h) {
  const int t = topo.twin(h);
  if (t >= 0) return identity(topo.target(topo.next(t)));
  StencilBuilder b;
  b.add(topo.origin(h), 1.0).add(topo.target(h), 1.0).add(topo.target(topo.next(h)), -1.0);
  return std::move(b).build();
}

/// Extraordinary-endpoint rule for the edge from interior vertex a of valence k to b.
Stencil butterfly_irregular(const Topology& topo, int a, int b) {
  const VertexRing& ring = topo.ring(a);
  const int k = ring.valence();
  int start = 0;
  for (int j = 0; j < k; ++j) {
    if (ring.neighbors[static_cast<std::size_t>(j)] == b) start = j;
  }
  std::vector<double> w(static_cast<std::size_t>(k));
  if (k == 3) {
    w = {5.0 / 12, -1.0 / 12, -1.0 / 12};
  } else if (k == 4) {
    w = {3.0 / 8, 0.0, -1.0 / 8, 0.0};
  } else {
    for (int j = 0; j < k; ++j) {
      const double t = 2.0 * std::numbers::pi * j / k;
      w[static_cast<std::size_t>(j)] = (0.25 + std::cos(t) + 0.5 * std::cos(2.0 * t)) / k;
    }
  }
  StencilBuilder s;
  s.add(a, 0.75);
  for (int j = 0; j < k; ++j) {
    s.add(ring.neighbors[static_cast<std::size_t>((start + j) % k)], w[static_cast<std::size_t>(j)]);
  }
  return std::move(s).build();
}

}  // namespace

StencilSet stencils_butterfly(const PNMesh& mesh) {
  require_arity(mesh, 3, "butterfly");
  const Topology topo(mesh);
  const int nv = static_cast<int>(mesh.vertex_count());
  StencilSet s;
  for (int v = 0; v < nv; ++v) s.stencils.push_back(identity(v));

  auto extraordinary = [&](int v) { return !topo.ring(v).boundary && topo.ring(v).valence() != 6; };

  for (const Edge& e : topo.edges()) {
    const int a = e.v0;
    const int b = e.v1;
    StencilBuilder sb;
    if (e.boundary()) {
      const auto [al, ar] = boundary_neighbors(topo.ring(a));
      const auto [bl, br] = boundary_neighbors(topo.ring(b));
      const int a_out = al == b ? ar : al;
      const int b_out = bl == a ? br : bl;
      sb.add(a, 9.0 / 16).add(b, 9.0 / 16).add(a_out, -1.0 / 16).add(b_out, -1.0 / 16);
    } else if (extraordinary(a) || extraordinary(b)) {
      if (extraordinary(a) && extraordinary(b)) {
        sb.add(butterfly_irregular(topo, a, b), 0.5).add(butterfly_irregular(topo, b, a), 0.5);
      } else if (extraordinary(a)) {
        sb.add(butterfly_irregular(topo, a, b), 1.0);
      } else {
        sb.add(butterfly_irregular(topo, b, a), 1.0);
      }
    } else {
      const int h = e.h0;
      const int t = e.h1;
      sb.add(a, 0.5).add(b, 0.5);
      sb.add(topo.target(topo.next(h)), 0.125).add(topo.target(topo.next(t)), 0.125);
      for (int w : {topo.next(h), topo.prev(h), topo.next(t), topo.prev(t)}) {
        sb.add(butterfly_wing(topo, w), -1.0 / 16);
      }
    }
    s.stencils.push_back(std::move(sb).build());
  }
  add_vertex_provenance(s, mesh.vertex_count(), Provenance::Interpolated);
  for (int e = 0; e < static_cast<int>(topo.edge_count()); ++e) s.provenance.push_back({Provenance::EdgePoint, e, -1});
  s.new_faces = primal_triangles(mesh, topo);
  s.new_vertex_count = s.stencils.size();
  return s;
}

StencilSet build_stencils(const PNMesh& mesh, SchemeKind kind) {
  switch (kind) {
    case SchemeKind::CatmullClark: return stencils_catmull_clark(mesh);
    case SchemeKind::DooSabin: return stencils_doo_sabin(mesh);
    case SchemeKind::Loop: return stencils_loop(mesh);
    case SchemeKind::Kobbelt: return stencils_kobbelt(mesh);
    case SchemeKind::Butterfly: return stencils_butterfly(mesh);
  }
  throw Error(ErrorCode::UnknownScheme, "unknown scheme");
}

namespace {

std::vector<Vec3> normals_or_zero(const PNMesh& mesh) {
  std::vector<Vec3> n = mesh.normals;
  n.resize(mesh.positions.size(), Vec3::Zero());
  return n;
}

void check_stencils(const PNMesh& mesh, const StencilSet& s) {
  const int nv = static_cast<int>(mesh.vertex_count());
  for (const Stencil& st : s.stencils) {
    for (const StencilTerm& t : st) {
      if (t.index < 0 || t.index >= nv) {
        throw Error(ErrorCode::IndexOutOfRange, "stencil references vertex " + std::to_string(t.index));
      }
    }
  }
}

}  // namespace

PNMesh linear_refine_mesh(const PNMesh& mesh, const StencilSet& s) {
  check_stencils(mesh, s);
  const auto normals = normals_or_zero(mesh);
  PNMesh out;
  out.positions.reserve(s.stencils.size());
  out.normals.reserve(s.stencils.size());
  for (const Stencil& st : s.stencils) {
    Vec3 p = Vec3::Zero();
    for (const StencilTerm& t : st) p += t.weight * mesh.positions[static_cast<std::size_t>(t.index)];
    out.positions.push_back(p);
    out.normals.push_back(project_average(st, normals, DegeneratePolicy::ZeroNormal));
  }
  out.faces = s.new_faces;
  return out;
}

PNMesh pn_refine_mesh(const PNMesh& mesh, const StencilSet& s) {
  check_stencils(mesh, s);
  const auto normals = normals_or_zero(mesh);
  PNMesh out;
  out.positions.reserve(s.stencils.size());
  out.normals.reserve(s.stencils.size());
  for (const Stencil& st : s.stencils) {
    const PointNormal pn = pn_refine_vertex(st, st, mesh.positions, normals);
    out.positions.push_back(pn.position);
    out.normals.push_back(pn.normal);
  }
  out.faces = s.new_faces;
  return out;
}

PNMesh estimate_normals(const PNMesh& mesh, bool overwrite) {
  PNMesh out = mesh;
  out.ensure_normal_slots();
  std::vector<Vec3> acc(mesh.vertex_count(), Vec3::Zero());
  std::size_t degenerate = 0;
  for (const Face& face : mesh.faces) {
    const std::size_t n = face.size();
    Vec3 newell = Vec3::Zero();
    for (std::size_t k = 0; k < n; ++k) {
      const Vec3& a = mesh.positions[static_cast<std::size_t>(face[k])];
      const Vec3& b = mesh.positions[static_cast<std::size_t>(face[(k + 1) % n])];
      newell += a.cross(b);
    }
    const double len = newell.norm();
    if (!(len > 0.0)) {
      ++degenerate;
      continue;
    }
    const Vec3 fn = newell / len;
    for (std::size_t k = 0; k < n; ++k) {
      const Vec3& p = mesh.positions[static_cast<std::size_t>(face[k])];
      const Vec3 u = mesh.positions[static_cast<std::size_t>(face[(k + 1) % n])] - p;
      const Vec3 w = mesh.positions[static_cast<std::size_t>(face[(k + n - 1) % n])] - p;
      const double angle = std::atan2(u.cross(w).norm(), u.dot(w));
      acc[static_cast<std::size_t>(face[k])] += angle * fn;
    }
  }
  if (degenerate > 0) detail::logger()->warn("{} zero-area faces ignored during normal estimation", degenerate);
  for (std::size_t v = 0; v < out.vertex_count(); ++v) {
    if (!overwrite && !is_zero(out.normals[v])) continue;
    const double len = acc[v].norm();
    out.normals[v] = len > 0.0 ? Vec3(acc[v] / len) : Vec3(Vec3::Zero());
  }
  return out;
}

}  // namespace pnsubd
