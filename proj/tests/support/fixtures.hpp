#pragma once

// Mesh and polygon fixtures shared by unit tests, the acceptance suite and
// the benchmarks.

#include <pnsubd/curve.hpp>
#include <pnsubd/mesh.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace pnsubd::fixtures {

/// Unit cube [0,1]^3, outward quads, no normals.
PNMesh cube();
/// Regular tetrahedron inscribed in the unit sphere with radial normals.
PNMesh tetrahedron();
PNMesh octahedron();
/// Icosahedron on the unit sphere with radial normals.
PNMesh icosahedron();
/// Triangular prism: two triangles and three quads.
PNMesh prism();

/// Open tube of `segments` x `rows` quads around the z axis, radial normals.
PNMesh cylinder(int segments, int rows, double radius, double height);
/// Closed torus around z with `nu` samples along the major circle and `nv`
/// along the minor one; quads with analytic normals. Vertex (i, j) has index
/// i * nv + j; j = 0 is the outer equator.
PNMesh torus(int nu, int nv, double major, double minor);
/// Planar quad grid in z = 0 with (nx+1) x (ny+1) vertices and +z normals.
PNMesh grid(int nx, int ny, double spacing = 1.0);
/// The same grid with every quad split into two triangles.
PNMesh triangle_grid(int nx, int ny, double spacing = 1.0);

/// Saddle z = 2xy over a planar fan of `sectors` quad patches of k x k
/// quads meeting at a central vertex (index 0) of valence `sectors`.
/// Normals are the analytic surface normals.
PNMesh hyperbolic_sheet(int sectors, int k, double extent = 1.0);

/// Deterministic random perturbation of a closed base mesh; `arity` selects
/// triangle (3) or quad (4) bases. Normals are estimated from the geometry.
PNMesh random_mesh(std::uint32_t seed, int arity);

/// Points and normals on the unit circle at the given angles (radians).
PNPolygon circle_polygon(const std::vector<double>& angles);

/// Rotation from a seed (uniform on SO(3) via a random unit quaternion).
Mat3 random_rotation(std::uint32_t seed);

/// Meshes used for corpus-wide properties, with names for reporting.
struct NamedMesh {
  std::string name;
  PNMesh mesh;
};
std::vector<NamedMesh> corpus();

/// Copies the mesh with every normal set to `n`.
PNMesh with_constant_normals(PNMesh mesh, const Vec3& n);

}  // namespace pnsubd::fixtures
