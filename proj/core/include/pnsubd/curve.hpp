#pragma once

// Point-normal refinement of polygons, plus the per-vertex PN kernel shared
// with the surface schemes.

#include <pnsubd/error.hpp>
#include <pnsubd/symbol.hpp>
#include <pnsubd/types.hpp>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pnsubd {

/// A control point with an optional unit normal; the zero vector means "no normal".
struct PointNormal {
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::Zero();

  bool has_normal() const { return !is_zero(normal); }
};

struct PNPolygon {
  std::vector<PointNormal> vertices;
  bool closed = true;

  std::vector<Vec3> positions() const;
  std::vector<Vec3> normals() const;
  static PNPolygon from(std::span<const Vec3> positions, std::span<const Vec3> normals, bool closed);
};

/// Intermediate quantities of one PN refinement step, kept for analysis.
struct RefinementContext {
  Vec3 q = Vec3::Zero();
  Vec3 n_new = Vec3::Zero();
  double l = 0.0;
  std::vector<double> heights;
  std::vector<Mat3> A;
  std::vector<Mat3> M;
  std::vector<double> weights;

  /// max-norm of sum_j w_j M_j - I; zero up to rounding.
  double affine_defect() const;
};

/// Below this norm a linearly averaged normal is treated as degenerate.
inline constexpr double kDegenerateNormalNorm = 1e-9;
/// Below this |denominator| the height formula uses the doubled new normal.
inline constexpr double kHeightDenominatorGuard = 1e-6;

/// Signed offset from q along n_new to the end of the circular/helical arc
/// leaving p_j with normal n_j and arriving with normal n_new.
double pn_height(const Vec3& p_j, const Vec3& n_j, const Vec3& q, const Vec3& n_new);

enum class DegeneratePolicy {
  /// Throw DegenerateAverage unless a zero input normal explains the collapse.
  Throw,
  /// Emit a zero normal.
  ZeroNormal,
};

/// Normalized weighted average of normals. Zero when every participating
/// normal is zero (or the average collapses and the policy allows it).
Vec3 project_average(std::span<const StencilTerm> stencil, std::span<const Vec3> normals,
                     DegeneratePolicy policy);

/// The PN update for one new vertex. `normal_stencil` defaults to `stencil`.
PointNormal pn_refine_vertex(std::span<const StencilTerm> stencil,
                             std::span<const StencilTerm> normal_stencil,
                             std::span<const Vec3> positions, std::span<const Vec3> normals,
                             RefinementContext* context = nullptr);

/// One stencil per output vertex of a binary refinement step. Closed polygons
/// give 2N outputs; open polygons keep only outputs whose support fits, except
/// that interpolatory masks fall back to lower-order Lagrange rules near the ends
/// so every old vertex is kept.
std::vector<Stencil> curve_stencils(std::size_t count, const Mask& mask, bool closed);

std::vector<Vec3> linear_refine(std::span<const Vec3> points, const Mask& mask, bool closed);

std::vector<Vec3> spherical_refine(std::span<const Vec3> normals, const Mask& mask, bool closed);

PNPolygon pn_refine_curve(const PNPolygon& poly, const Mask& mask,
                          const std::optional<Mask>& normal_mask = std::nullopt);

/// Curve schemes by name: bspline<d> (chaikin = bspline2), <2n>-point (midpoint = 2-point).
Mask curve_mask(std::string_view name);

enum class CurveVariant { Linear, PN };
CurveVariant parse_curve_variant(std::string_view name);

PNPolygon subdivide_curve(const PNPolygon& poly, std::string_view scheme, int levels,
                          CurveVariant variant,
                          const std::optional<Mask>& normal_mask = std::nullopt);

/// Signed circumcircle curvature of consecutive triples; the sign is the
/// turning direction relative to the polygon's mean plane normal. Closed
/// polygons yield one value per vertex, open ones one per interior vertex.
std::vector<double> curvature_comb(std::span<const Vec3> points, bool closed);

/// m-th forward differences scaled by 2^(level*m).
std::vector<Vec3> difference_tensor(std::span<const Vec3> points, int order, int level);

}  // namespace pnsubd
