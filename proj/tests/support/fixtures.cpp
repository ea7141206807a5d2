#include "fixtures.hpp"

#include <pnsubd/schemes.hpp>

#include <Eigen/Geometry>

#include <cmath>
#include <map>
#include <numbers>

namespace pnsubd::fixtures {
namespace {

void radial_normals(PNMesh& m) {
  m.normals.clear();
  for (const Vec3& p : m.positions) m.normals.push_back(p.normalized());
}

}  // namespace

PNMesh cube() {
  PNMesh m;
  for (int i = 0; i < 8; ++i) m.positions.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  m.faces = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  m.ensure_normal_slots();
  return m;
}

PNMesh tetrahedron() {
  PNMesh m;
  const double s = 1.0 / std::sqrt(3.0);
  m.positions = {Vec3(1, 1, 1) * s, Vec3(1, -1, -1) * s, Vec3(-1, 1, -1) * s, Vec3(-1, -1, 1) * s};
  m.faces = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  radial_normals(m);
  return m;
}

PNMesh octahedron() {
  PNMesh m;
  m.positions = {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0), Vec3(0, 0, 1), Vec3(0, 0, -1)};
  m.faces = {{4, 0, 2}, {4, 2, 1}, {4, 1, 3}, {4, 3, 0}, {5, 2, 0}, {5, 1, 2}, {5, 3, 1}, {5, 0, 3}};
  radial_normals(m);
  return m;
}

PNMesh icosahedron() {
  PNMesh m;
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  const std::vector<Vec3> raw = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                                 {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (const Vec3& p : raw) m.positions.push_back(p.normalized());
  m.faces = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  radial_normals(m);
  return m;
}

PNMesh prism() {
  PNMesh m;
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 3; ++i) {
      const double a = 2.0 * std::numbers::pi * i / 3.0;
      m.positions.emplace_back(std::cos(a), std::sin(a), k == 0 ? -0.5 : 0.5);
    }
  }
  m.faces = {{0, 2, 1}, {3, 4, 5}, {0, 1, 4, 3}, {1, 2, 5, 4}, {2, 0, 3, 5}};
  m.ensure_normal_slots();
  return m;
}

PNMesh cylinder(int segments, int rows, double radius, double height) {
  PNMesh m;
  for (int r = 0; r <= rows; ++r) {
    for (int s = 0; s < segments; ++s) {
      const double a = 2.0 * std::numbers::pi * s / segments;
      m.positions.emplace_back(radius * std::cos(a), radius * std::sin(a), height * r / rows - height / 2);
      m.normals.emplace_back(std::cos(a), std::sin(a), 0.0);
    }
  }
  for (int r = 0; r < rows; ++r) {
    for (int s = 0; s < segments; ++s) {
      const int a = r * segments + s;
      const int b = r * segments + (s + 1) % segments;
      m.faces.push_back({a, b, b + segments, a + segments});
    }
  }
  return m;
}

PNMesh torus(int nu, int nv, double major, double minor) {
  PNMesh m;
  for (int i = 0; i < nu; ++i) {
    const double u = 2.0 * std::numbers::pi * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double v = 2.0 * std::numbers::pi * j / nv;
      const Vec3 radial(std::cos(u), std::sin(u), 0.0);
      const Vec3 n = std::cos(v) * radial + std::sin(v) * Vec3::UnitZ();
      m.positions.push_back(major * radial + minor * n);
      m.normals.push_back(n);
    }
  }
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const int a = i * nv + j;
      const int b = ((i + 1) % nu) * nv + j;
      const int c = ((i + 1) % nu) * nv + (j + 1) % nv;
      const int d = i * nv + (j + 1) % nv;
      m.faces.push_back({a, b, c, d});
    }
  }
  return m;
}

PNMesh grid(int nx, int ny, double spacing) {
  PNMesh m;
  for (int y = 0; y <= ny; ++y) {
    for (int x = 0; x <= nx; ++x) {
      m.positions.emplace_back(spacing * x, spacing * y, 0.0);
      m.normals.emplace_back(0.0, 0.0, 1.0);
    }
  }
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      const int a = y * (nx + 1) + x;
      m.faces.push_back({a, a + 1, a + nx + 2, a + nx + 1});
    }
  }
  return m;
}

PNMesh triangle_grid(int nx, int ny, double spacing) {
  PNMesh quads = grid(nx, ny, spacing);
  PNMesh m = quads;
  m.faces.clear();
  for (const Face& f : quads.faces) {
    m.faces.push_back({f[0], f[1], f[2]});
    m.faces.push_back({f[0], f[2], f[3]});
  }
  return m;
}

PNMesh hyperbolic_sheet(int sectors, int k, double extent) {
  PNMesh m;
  std::map<std::tuple<int, int, int>, int> ids;
  // Key: canonical (spoke or sector, a, b) so shared spokes map to one vertex.
  auto vertex = [&](int sector, int a, int b) {
    sector = (sector % sectors + sectors) % sectors;
    std::tuple<int, int, int> key{sector, a, b};
    if (a == 0 && b == 0) key = {-1, 0, 0};
    else if (b == 0) key = {sector, a, 0};
    else if (a == 0) key = {(sector + 1) % sectors, b, 0};
    if (const auto it = ids.find(key); it != ids.end()) return it->second;
    const double t0 = 2.0 * std::numbers::pi * sector / sectors;
    const double t1 = 2.0 * std::numbers::pi * (sector + 1) / sectors;
    const Vec3 u(std::cos(t0), std::sin(t0), 0.0);
    const Vec3 w(std::cos(t1), std::sin(t1), 0.0);
    const Vec3 q = extent * (static_cast<double>(a) / k * u + static_cast<double>(b) / k * w);
    const int id = static_cast<int>(m.positions.size());
    m.positions.emplace_back(q.x(), q.y(), 2.0 * q.x() * q.y());
    m.normals.push_back(Vec3(-2.0 * q.y(), -2.0 * q.x(), 1.0).normalized());
    ids.emplace(key, id);
    return id;
  };
  vertex(0, 0, 0);
  for (int s = 0; s < sectors; ++s) {
    for (int b = 0; b < k; ++b) {
      for (int a = 0; a < k; ++a) {
        m.faces.push_back({vertex(s, a, b), vertex(s, a + 1, b), vertex(s, a + 1, b + 1), vertex(s, a, b + 1)});
      }
    }
  }
  return m;
}

PNMesh random_mesh(std::uint32_t seed, int arity) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.08, 0.08);
  PNMesh base;
  if (arity == 3) {
    base = (seed % 2 == 0) ? icosahedron() : linear_refine_mesh(icosahedron(), stencils_loop(icosahedron()));
  } else {
    base = (seed % 2 == 0) ? linear_refine_mesh(cube(), stencils_catmull_clark(cube())) : torus(6, 5, 2.0, 0.8);
  }
  for (Vec3& p : base.positions) p += Vec3(jitter(rng), jitter(rng), jitter(rng));
  return estimate_normals(base, true);
}

PNPolygon circle_polygon(const std::vector<double>& angles) {
  PNPolygon p;
  p.closed = true;
  for (double a : angles) {
    const Vec3 v(std::cos(a), std::sin(a), 0.0);
    p.vertices.push_back({v, v});
  }
  return p;
}

Mat3 random_rotation(std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

std::vector<NamedMesh> corpus() {
  std::vector<NamedMesh> out = {
      {"cube", estimate_normals(cube())},
      {"tetrahedron", tetrahedron()},
      {"octahedron", octahedron()},
      {"icosahedron", icosahedron()},
      {"prism", estimate_normals(prism())},
      {"cylinder", cylinder(8, 3, 1.0, 2.0)},
      {"torus", torus(6, 4, 2.0, 1.0)},
      {"grid", grid(4, 4)},
      {"triangle_grid", triangle_grid(3, 3)},
      {"hyperbolic_sheet", hyperbolic_sheet(5, 2)},
  };
  for (std::uint32_t seed = 1; seed <= 2; ++seed) {
    out.push_back({"random_tri_" + std::to_string(seed), random_mesh(seed, 3)});
    out.push_back({"random_quad_" + std::to_string(seed), random_mesh(seed, 4)});
  }
  return out;
}

PNMesh with_constant_normals(PNMesh mesh, const Vec3& n) {
  mesh.normals.assign(mesh.positions.size(), n.normalized());
  return mesh;
}

}  // namespace pnsubd::fixtures
