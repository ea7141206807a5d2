#include <pnsubd/analysis.hpp>
#include <pnsubd/schemes.hpp>

#include "catch_amalgamated.hpp"
#include "fixtures.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace pnsubd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Vec3> sphere_samples(const Vec3& c, double r, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Vec3> out;
  for (int i = 0; i < count; ++i) out.push_back(c + r * Vec3(g(rng), g(rng), g(rng)).normalized());
  return out;
}

}  // namespace

TEST_CASE("primitive distances") {
  PrimitiveParams p;
  p.center = Vec3(1, 2, 3);
  p.radius = 2.0;
  CHECK_THAT(primitive_distance(PrimitiveKind::Sphere, p, Vec3(1, 2, 8)), WithinAbs(3.0, 1e-15));
  CHECK_THAT(primitive_distance(PrimitiveKind::Sphere, p, Vec3(1, 2, 3)), WithinAbs(2.0, 1e-15));
  // Cylinder along z through (1,2,*): height is irrelevant.
  CHECK_THAT(primitive_distance(PrimitiveKind::Cylinder, p, Vec3(1, 5, -40)), WithinAbs(1.0, 1e-15));
  // Circle in the plane z = 3.
  CHECK_THAT(primitive_distance(PrimitiveKind::Circle, p, Vec3(1, 4, 7)), WithinAbs(4.0, 1e-15));
  CHECK_THAT(primitive_distance(PrimitiveKind::Circle, p, Vec3(1, 2, 3)), WithinAbs(2.0, 1e-15));
  CHECK_THAT(primitive_distance(PrimitiveKind::Plane, p, Vec3(9, 9, 1)), WithinAbs(2.0, 1e-15));
  PrimitiveParams t;
  t.radius = 2.0;
  t.minor_radius = 1.0;
  CHECK_THAT(primitive_distance(PrimitiveKind::Torus, t, Vec3(3, 0, 0)), WithinAbs(0.0, 1e-15));
  CHECK_THAT(primitive_distance(PrimitiveKind::Torus, t, Vec3(0, 2, 1)), WithinAbs(0.0, 1e-15));
  CHECK_THAT(primitive_distance(PrimitiveKind::Torus, t, Vec3(0, 0, 0)), WithinAbs(1.0, 1e-15));
}

TEST_CASE("fits recover primitives from exact samples") {
  const Vec3 c(0.5, -1.0, 2.0);
  const PrimitiveFit s = primitive_residual(sphere_samples(c, 1.5, 50, 1), PrimitiveKind::Sphere);
  CHECK(s.fitted);
  CHECK(s.max_residual < 1e-9);
  CHECK((s.params.center - c).norm() < 1e-9);
  CHECK_THAT(s.params.radius, WithinAbs(1.5, 1e-9));

  const Mat3 r = fixtures::random_rotation(4);
  std::vector<Vec3> circle;
  std::vector<Vec3> cylinder;
  std::vector<Vec3> plane;
  for (int i = 0; i < 12; ++i) {
    const double t = 0.37 * i * i + 0.1;
    circle.push_back(c + r * Vec3(0.8 * std::cos(t), 0.8 * std::sin(t), 0.0));
    cylinder.push_back(c + r * Vec3(1.2 * std::cos(t), 1.2 * std::sin(t), 0.3 * i - 1.0));
    plane.push_back(c + r * Vec3(std::cos(t) * i, std::sin(3 * t), 0.0));
  }
  const PrimitiveFit ci = primitive_residual(circle, PrimitiveKind::Circle);
  CHECK(ci.max_residual < 1e-9);
  CHECK_THAT(ci.params.radius, WithinAbs(0.8, 1e-9));
  CHECK(std::abs(std::abs(ci.params.axis.dot(r.col(2))) - 1.0) < 1e-9);

  const PrimitiveFit cy = primitive_residual(cylinder, PrimitiveKind::Cylinder);
  CHECK(cy.max_residual < 1e-8);
  CHECK_THAT(cy.params.radius, WithinAbs(1.2, 1e-8));

  const PrimitiveFit pl = primitive_residual(plane, PrimitiveKind::Plane);
  CHECK(pl.max_residual < 1e-12);
  CHECK(std::abs(std::abs(pl.params.axis.dot(r.col(2))) - 1.0) < 1e-12);
}

TEST_CASE("fits report noisy residuals") {
  auto pts = sphere_samples(Vec3::Zero(), 1.0, 40, 2);
  pts[0] *= 1.1;
  const PrimitiveFit s = primitive_residual(pts, PrimitiveKind::Sphere);
  CHECK(s.max_residual > 1e-3);
  CHECK(s.rms_residual < s.max_residual);
}

TEST_CASE("fit errors") {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  const auto pts = sphere_samples(Vec3::Zero(), 1.0, 3, 3);
  CHECK(code_of([&] { primitive_residual(pts, PrimitiveKind::Sphere); }) == ErrorCode::TooFewPoints);
  const auto more = sphere_samples(Vec3::Zero(), 1.0, 20, 3);
  CHECK(code_of([&] { primitive_residual(more, PrimitiveKind::Torus); }) == ErrorCode::InvalidArgument);
  CHECK_THROWS_AS(parse_primitive("cone"), Error);
  for (PrimitiveKind k : {PrimitiveKind::Circle, PrimitiveKind::Sphere, PrimitiveKind::Cylinder,
                          PrimitiveKind::Torus, PrimitiveKind::Plane}) {
    CHECK(parse_primitive(to_string(k)) == k);
  }
}

TEST_CASE("supplied parameters are not refitted") {
  PrimitiveParams p;
  p.radius = 2.0;
  const auto pts = sphere_samples(Vec3::Zero(), 1.0, 10, 5);
  const PrimitiveFit f = primitive_residual(pts, PrimitiveKind::Sphere, p);
  CHECK_FALSE(f.fitted);
  CHECK_THAT(f.max_residual, WithinAbs(1.0, 1e-12));
}

TEST_CASE("angle defects satisfy Gauss-Bonnet") {
  for (const auto& [name, mesh] : fixtures::corpus()) {
    const MeshReport r = validate(mesh);
    if (r.boundary_edge_count != 0) continue;
    INFO(name);
    const CurvatureField f = discrete_curvature(mesh);
    double total = 0.0;
    for (std::size_t v = 0; v < f.gaussian.size(); ++v) {
      REQUIRE(f.defined[v]);
      total += f.gaussian[v] * f.area_weights[v];
    }
    CHECK_THAT(total, WithinAbs(2.0 * kPi * static_cast<double>(r.euler_characteristic), 1e-9));
  }
}

TEST_CASE("curvature of a refined sphere") {
  const PNMesh s = subdivide_surface(fixtures::icosahedron(), SchemeKind::Loop, 4, Variant::PN);
  const CurvatureField f = discrete_curvature(s);
  for (std::size_t v = 0; v < f.gaussian.size(); ++v) {
    CHECK_THAT(f.gaussian[v], WithinRel(1.0, 0.02));
    CHECK_THAT(f.mean[v], WithinRel(1.0, 0.02));
  }
}

TEST_CASE("curvature of a refined cylinder") {
  const PNMesh c = subdivide_surface(fixtures::cylinder(8, 4, 1.0, 2.0), SchemeKind::CatmullClark, 4, Variant::PN);
  const CurvatureField f = discrete_curvature(c);
  int defined = 0;
  for (std::size_t v = 0; v < f.gaussian.size(); ++v) {
    if (!f.defined[v]) continue;
    ++defined;
    CHECK_THAT(f.gaussian[v], WithinAbs(0.0, 1e-6));
    CHECK_THAT(f.mean[v], WithinRel(0.5, 0.05));
  }
  CHECK(defined > 0);
}

TEST_CASE("flat grids have zero curvature and undefined boundaries") {
  const CurvatureField f = discrete_curvature(fixtures::grid(4, 4));
  int defined = 0;
  for (std::size_t v = 0; v < f.gaussian.size(); ++v) {
    if (!f.defined[v]) continue;
    ++defined;
    CHECK_THAT(f.gaussian[v], WithinAbs(0.0, 1e-12));
    CHECK_THAT(f.mean[v], WithinAbs(0.0, 1e-12));
  }
  CHECK(defined == 9);
  const std::string csv = format_curvature_csv(f);
  CHECK(csv.rfind("vertex_id,gaussian,mean\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("decay rate of geometric sequences") {
  std::vector<double> seq;
  for (int i = 0; i < 8; ++i) seq.push_back(3.0 * std::pow(0.4, i));
  CHECK_THAT(decay_rate(seq), WithinAbs(0.4, 1e-12));
  // Only the tail counts.
  seq[0] = 100.0;
  seq[1] = 0.001;
  CHECK_THAT(decay_rate(seq), WithinAbs(0.4, 1e-12));
  CHECK_THROWS_AS(decay_rate(std::vector<double>{1.0, 0.5, 0.25}), Error);
  CHECK_THROWS_AS(decay_rate(std::vector<double>{1.0, 0.5, 0.0, 0.1}), Error);
}

TEST_CASE("mesh comparison") {
  const PNMesh a = fixtures::icosahedron();
  PNMesh b = a;
  b.positions[4].x() += 0.25;
  b.normals[2] = -b.normals[2];
  CHECK_THAT(compare_meshes(a, b), WithinAbs(0.25, 1e-15));
  CHECK_THAT(compare_normals(a, b), WithinAbs(2.0, 1e-15));
  PNMesh c = a;
  c.faces.pop_back();
  CHECK_THROWS_AS(compare_meshes(a, c), Error);
}

TEST_CASE("fit report format") {
  PrimitiveFit f;
  f.kind = PrimitiveKind::Sphere;
  f.max_residual = 0.5;
  const std::string text = format_fit(f);
  CHECK(text.find("kind=sphere\n") != std::string::npos);
  CHECK(text.find("max_residual=0.5\n") != std::string::npos);
  CHECK(text.find("axis=") == std::string::npos);
}
