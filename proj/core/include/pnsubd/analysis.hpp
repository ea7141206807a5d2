#pragma once

// Numerical diagnostics: residuals against analytic primitives, discrete
// curvature, decay-rate estimates and mesh comparison.

#include <pnsubd/mesh.hpp>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pnsubd {

enum class PrimitiveKind { Circle, Sphere, Cylinder, Torus, Plane };
PrimitiveKind parse_primitive(std::string_view name);
std::string_view to_string(PrimitiveKind kind);

/// Which fields apply depends on the kind:
///   circle: center, axis (plane normal), radius
///   sphere: center, radius
///   cylinder: center (a point on the axis), axis, radius
///   torus: center, axis, radius (major), minor_radius
///   plane: center (a point on the plane), axis (normal)
struct PrimitiveParams {
  Vec3 center = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();
  double radius = 1.0;
  double minor_radius = 0.0;
};

struct PrimitiveFit {
  PrimitiveKind kind = PrimitiveKind::Sphere;
  PrimitiveParams params;
  double max_residual = 0.0;
  double rms_residual = 0.0;
  bool fitted = false;
};

/// Orthogonal distance from p to the primitive.
double primitive_distance(PrimitiveKind kind, const PrimitiveParams& params, const Vec3& p);

/// Residuals against supplied parameters, or least-squares fitted ones when
/// `params` is empty (PCA and algebraic start, then Levenberg-Marquardt).
/// Tori are never fitted.
PrimitiveFit primitive_residual(std::span<const Vec3> points, PrimitiveKind kind,
                                const std::optional<PrimitiveParams>& params = std::nullopt);

struct CurvatureField {
  std::vector<double> gaussian;
  std::vector<double> mean;
  /// Mixed Voronoi area per vertex.
  std::vector<double> area_weights;
  /// False for boundary and isolated vertices.
  std::vector<bool> defined;
};

/// Angle-defect Gaussian and cotangent-Laplacian mean curvature. Polygons
/// are triangulated first: quads along the shorter diagonal, larger faces as
/// fans. Mean curvature is positive where the surface bends away from its
/// face normals (a sphere with outward faces has H = 1/r).
CurvatureField discrete_curvature(const PNMesh& mesh);

/// Per-level contraction ratio: exp of the least-squares slope of log values
/// over the last ceil(n/2) entries. Needs at least 4 entries, all positive.
double decay_rate(std::span<const double> values);

/// Max vertex distance between meshes with identical faces.
double compare_meshes(const PNMesh& a, const PNMesh& b);

/// Max distance between corresponding normals.
double compare_normals(const PNMesh& a, const PNMesh& b);

std::string format_fit(const PrimitiveFit& fit);
/// `vertex_id,gaussian,mean` rows for defined vertices, with a header line.
std::string format_curvature_csv(const CurvatureField& field);

}  // namespace pnsubd
