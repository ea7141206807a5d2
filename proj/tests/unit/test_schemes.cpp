#include <pnsubd/analysis.hpp>
#include <pnsubd/schemes.hpp>
#include <pnsubd/topology.hpp>

#include "catch_amalgamated.hpp"
#include "fixtures.hpp"

#include <cmath>
#include <numbers>

using namespace pnsubd;
using Catch::Matchers::WithinAbs;

namespace {

bool compatible(const PNMesh& m, SchemeKind k) {
  if (k == SchemeKind::Loop || k == SchemeKind::Butterfly) return m.all_faces_have_arity(3);
  if (k == SchemeKind::Kobbelt) return m.all_faces_have_arity(4);
  return true;
}

Vec3 centroid(const PNMesh& m, const Face& f) {
  Vec3 c = Vec3::Zero();
  for (int v : f) c += m.positions[v];
  return c / static_cast<double>(f.size());
}

}  // namespace

TEST_CASE("scheme names") {
  for (SchemeKind k : kAllSchemes) CHECK(parse_scheme(scheme_name(k)) == k);
  CHECK(parse_scheme("catmull-clark") == SchemeKind::CatmullClark);
  CHECK(parse_scheme("doo-sabin") == SchemeKind::DooSabin);
  CHECK_THROWS_AS(parse_scheme("sqrt3"), Error);
  for (Variant v : {Variant::Linear, Variant::PN, Variant::Modified, Variant::PNModified}) {
    CHECK(parse_variant(variant_name(v)) == v);
  }
  try {
    parse_variant("cubic");
    FAIL("expected UnsupportedVariant");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedVariant);
  }
}

TEST_CASE("element counts after one round") {
  const PNMesh cube = fixtures::cube();
  const PNMesh cc = subdivide_surface(cube, SchemeKind::CatmullClark, 1, Variant::Linear);
  CHECK(cc.vertex_count() == 8 + 12 + 6);
  CHECK(cc.face_count() == 24);
  const PNMesh ds = subdivide_surface(cube, SchemeKind::DooSabin, 1, Variant::Linear);
  CHECK(ds.vertex_count() == 24);
  CHECK(ds.face_count() == 6 + 12 + 8);
  const PNMesh kob = subdivide_surface(cube, SchemeKind::Kobbelt, 1, Variant::Linear);
  CHECK(kob.vertex_count() == 26);
  CHECK(kob.face_count() == 24);
  const PNMesh ico = fixtures::icosahedron();
  for (SchemeKind k : {SchemeKind::Loop, SchemeKind::Butterfly}) {
    const PNMesh out = subdivide_surface(ico, k, 2, Variant::PN);
    CHECK(out.vertex_count() == 162);
    CHECK(out.face_count() == 320);
  }
  const PNMesh prism = subdivide_surface(fixtures::prism(), SchemeKind::CatmullClark, 1, Variant::Linear);
  CHECK(prism.vertex_count() == 6 + 9 + 5);
  CHECK(prism.all_faces_have_arity(4));
}

TEST_CASE("every scheme output validates and its stencils are affine") {
  for (const auto& [name, mesh] : fixtures::corpus()) {
    for (SchemeKind k : kAllSchemes) {
      if (!compatible(mesh, k)) continue;
      INFO(name << " " << scheme_name(k));
      const StencilSet s = build_stencils(mesh, k);
      CHECK(s.stencils.size() == s.new_vertex_count);
      CHECK(s.provenance.size() == s.new_vertex_count);
      for (const Stencil& st : s.stencils) {
        CHECK_THAT(weight_sum(st), WithinAbs(1.0, 1e-14));
        for (std::size_t i = 1; i < st.size(); ++i) CHECK(st[i - 1].index < st[i].index);
      }
      const PNMesh out = pn_refine_mesh(mesh, s);
      const MeshReport r = validate(out);
      CHECK(r.problems.empty());
      CHECK(r.euler_characteristic == validate(mesh).euler_characteristic);
    }
  }
}

TEST_CASE("Catmull-Clark vertex rule on the cube") {
  const PNMesh cube = fixtures::cube();
  const Topology topo(cube);
  const PNMesh out = subdivide_surface(cube, SchemeKind::CatmullClark, 1, Variant::Linear);
  for (int v = 0; v < 8; ++v) {
    const VertexRing& ring = topo.ring(v);
    const double n = ring.valence();
    Vec3 q = Vec3::Zero();
    for (int f : ring.faces) q += centroid(cube, cube.faces[f]);
    q /= n;
    Vec3 r = Vec3::Zero();
    for (int u : ring.neighbors) r += 0.5 * (cube.positions[v] + cube.positions[u]);
    r /= n;
    const Vec3 expect = (q + 2.0 * r + (n - 3.0) * cube.positions[v]) / n;
    CHECK((out.positions[v] - expect).norm() < 1e-15);
  }
  CHECK((out.positions[0] - Vec3(2.0 / 9, 2.0 / 9, 2.0 / 9)).norm() < 1e-15);
  for (std::size_t e = 0; e < topo.edge_count(); ++e) {
    const Edge& edge = topo.edge(static_cast<int>(e));
    const Vec3 expect = 0.25 * (cube.positions[edge.v0] + cube.positions[edge.v1] +
                                centroid(cube, cube.faces[topo.halfedge_face(edge.h0)]) +
                                centroid(cube, cube.faces[topo.halfedge_face(edge.h1)]));
    CHECK((out.positions[8 + e] - expect).norm() < 1e-15);
  }
}

TEST_CASE("Loop vertex rule on the octahedron") {
  const PNMesh oct = fixtures::octahedron();
  const Topology topo(oct);
  const PNMesh out = subdivide_surface(oct, SchemeKind::Loop, 1, Variant::Linear);
  for (int v = 0; v < 6; ++v) {
    const VertexRing& ring = topo.ring(v);
    const double n = ring.valence();
    const double c = 3.0 / 8 + 0.25 * std::cos(2.0 * std::numbers::pi / n);
    const double beta = (5.0 / 8 - c * c) / n;
    Vec3 expect = (1.0 - n * beta) * oct.positions[v];
    for (int u : ring.neighbors) expect += beta * oct.positions[u];
    CHECK((out.positions[v] - expect).norm() < 1e-15);
  }
}

TEST_CASE("interpolatory schemes keep old vertices") {
  const PNMesh ico = fixtures::icosahedron();
  const PNMesh b = subdivide_surface(ico, SchemeKind::Butterfly, 1, Variant::Linear);
  for (std::size_t v = 0; v < ico.vertex_count(); ++v) CHECK(b.positions[v] == ico.positions[v]);
  const PNMesh t = fixtures::torus(6, 4, 2.0, 1.0);
  const PNMesh k = subdivide_surface(t, SchemeKind::Kobbelt, 1, Variant::PN);
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    CHECK(k.positions[v] == t.positions[v]);
    CHECK((k.normals[v] - t.normals[v]).norm() < 1e-15);
  }
}

TEST_CASE("regular butterfly edge weights on a flat triangle grid") {
  // On a planar grid with an affine height field the 8-point rule is exact.
  PNMesh g = fixtures::triangle_grid(6, 6);
  for (Vec3& p : g.positions) p.z() = 0.3 * p.x() - 0.7 * p.y() + 1.0;
  const PNMesh out = subdivide_surface(g, SchemeKind::Butterfly, 1, Variant::Linear);
  for (const Vec3& p : out.positions) CHECK_THAT(p.z(), WithinAbs(0.3 * p.x() - 0.7 * p.y() + 1.0, 1e-13));
}

TEST_CASE("Kobbelt reproduces cubic height fields on interior grid edges") {
  PNMesh g = fixtures::grid(8, 8);
  auto f = [](double x, double y) { return 0.01 * x * x * x - 0.1 * x * y + 0.05 * y * y; };
  for (Vec3& p : g.positions) p.z() = f(p.x(), p.y());
  const PNMesh out = subdivide_surface(g, SchemeKind::Kobbelt, 1, Variant::Linear);
  for (const Vec3& p : out.positions) {
    if (p.x() < 2.0 || p.x() > 6.0 || p.y() < 2.0 || p.y() > 6.0) continue;
    CHECK_THAT(p.z(), WithinAbs(f(p.x(), p.y()), 1e-12));
  }
}

TEST_CASE("arity and variant errors") {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  const PNMesh cube = fixtures::cube();
  CHECK(code_of([&] { subdivide_surface(cube, SchemeKind::Loop, 1, Variant::PN); }) == ErrorCode::WrongFaceArity);
  CHECK(code_of([&] { subdivide_surface(cube, SchemeKind::Butterfly, 1, Variant::PN); }) ==
        ErrorCode::WrongFaceArity);
  CHECK(code_of([&] { subdivide_surface(fixtures::tetrahedron(), SchemeKind::Kobbelt, 1, Variant::PN); }) ==
        ErrorCode::WrongFaceArity);
  CHECK(code_of([&] { subdivide_surface(cube, SchemeKind::DooSabin, 1, Variant::Modified); }) ==
        ErrorCode::UnsupportedVariant);
  CHECK(code_of([&] { subdivide_surface(cube, SchemeKind::CatmullClark, -1, Variant::PN); }) ==
        ErrorCode::InvalidArgument);
  PNMesh antipodal = fixtures::grid(1, 1);
  antipodal.normals = {Vec3::UnitZ(), -Vec3::UnitZ(), Vec3::UnitZ(), -Vec3::UnitZ()};
  CHECK(code_of([&] { subdivide_surface(antipodal, SchemeKind::CatmullClark, 1, Variant::PN); }) ==
        ErrorCode::DegenerateAverage);
  CHECK_NOTHROW(subdivide_surface(antipodal, SchemeKind::CatmullClark, 1, Variant::Linear));
}

TEST_CASE("cleared normals give the linear result") {
  PNMesh m = fixtures::icosahedron();
  for (Vec3& n : m.normals) n = Vec3::Zero();
  const PNMesh pn = subdivide_surface(m, SchemeKind::Loop, 2, Variant::PN);
  const PNMesh lin = subdivide_surface(m, SchemeKind::Loop, 2, Variant::Linear);
  CHECK(pn.positions == lin.positions);
}

TEST_CASE("PN schemes reproduce spheres and cylinders") {
  PrimitiveParams unit;
  for (SchemeKind k : {SchemeKind::Loop, SchemeKind::Butterfly}) {
    const PNMesh out = subdivide_surface(fixtures::icosahedron(), k, 3, Variant::PN);
    CHECK(primitive_residual(out.positions, PrimitiveKind::Sphere, unit).max_residual < 1e-12);
  }
  for (SchemeKind k : {SchemeKind::CatmullClark, SchemeKind::DooSabin}) {
    const PNMesh out = subdivide_surface(fixtures::cylinder(8, 3, 1.0, 2.0), k, 3, Variant::PN);
    CHECK(primitive_residual(out.positions, PrimitiveKind::Cylinder, unit).max_residual < 1e-12);
  }
  const PNMesh lin = subdivide_surface(fixtures::icosahedron(), SchemeKind::Loop, 3, Variant::Linear);
  CHECK(primitive_residual(lin.positions, PrimitiveKind::Sphere, unit).max_residual > 1e-2);
}

TEST_CASE("estimated normals on a closed convex mesh point outward") {
  const PNMesh m = estimate_normals(fixtures::cube());
  for (std::size_t v = 0; v < m.vertex_count(); ++v) {
    CHECK_THAT(m.normals[v].norm(), WithinAbs(1.0, 1e-15));
    CHECK(m.normals[v].dot(m.positions[v] - Vec3(0.5, 0.5, 0.5)) > 0.0);
  }
  PNMesh keep = fixtures::cube();
  keep.normals.assign(8, Vec3::Zero());
  keep.normals[2] = Vec3::UnitX();
  CHECK(estimate_normals(keep).normals[2] == Vec3::UnitX());
  CHECK(estimate_normals(keep, true).normals[2] != Vec3::UnitX());
}

TEST_CASE("refined normals are unit or zero") {
  for (SchemeKind k : kAllSchemes) {
    const PNMesh base = k == SchemeKind::Loop || k == SchemeKind::Butterfly ? fixtures::random_mesh(3, 3)
                                                                            : fixtures::random_mesh(3, 4);
    const PNMesh out = subdivide_surface(base, k, 2, Variant::PN);
    for (const Vec3& n : out.normals) CHECK_THAT(n.norm(), WithinAbs(1.0, 1e-14));
  }
}
