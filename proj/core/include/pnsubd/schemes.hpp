#pragma once

// Stencil construction for the five surface schemes and stencil-driven mesh
// refinement. Any scheme's output can be refined linearly or with the PN
// update, which shares its kernel with the curve code.

#include <pnsubd/mesh.hpp>

#include <string_view>
#include <vector>

namespace pnsubd {

enum class SchemeKind { CatmullClark, DooSabin, Loop, Kobbelt, Butterfly };

/// Accepts cc|ds|loop|kobbelt|butterfly and the long forms (catmull-clark, doo-sabin).
SchemeKind parse_scheme(std::string_view name);
std::string_view scheme_name(SchemeKind kind);
inline constexpr SchemeKind kAllSchemes[] = {SchemeKind::CatmullClark, SchemeKind::DooSabin, SchemeKind::Loop,
                                             SchemeKind::Kobbelt, SchemeKind::Butterfly};

enum class Variant { Linear, PN, Modified, PNModified };
Variant parse_variant(std::string_view name);
std::string_view variant_name(Variant v);

enum class Provenance { VertexPoint, EdgePoint, FacePoint, DualPoint, Interpolated };
std::string_view to_string(Provenance p);

struct VertexOrigin {
  Provenance kind = Provenance::VertexPoint;
  /// Old vertex, edge or face id, depending on kind.
  int source = -1;
  /// Corner within the source face for dual points, else -1.
  int sub = -1;
};

/// Index layout. Primal schemes: old vertices at [0, V), edge points at
/// V + edge id, face points (Catmull-Clark and Kobbelt) at V + E + face id,
/// with edge ids from Topology. Doo-Sabin: one point per face corner, indexed
/// by halfedge id.
struct StencilSet {
  std::size_t new_vertex_count = 0;
  std::vector<Stencil> stencils;
  std::vector<Face> new_faces;
  std::vector<VertexOrigin> provenance;
};

StencilSet stencils_catmull_clark(const PNMesh& mesh);
StencilSet stencils_doo_sabin(const PNMesh& mesh);
StencilSet stencils_loop(const PNMesh& mesh);
StencilSet stencils_kobbelt(const PNMesh& mesh);
StencilSet stencils_butterfly(const PNMesh& mesh);
StencilSet build_stencils(const PNMesh& mesh, SchemeKind kind);

/// Positions are stencil combinations; normals are averaged with the same
/// weights and projected, collapsing to zero where the average degenerates.
PNMesh linear_refine_mesh(const PNMesh& mesh, const StencilSet& s);

/// PN update per new vertex: q plus the weighted height sum along the
/// projected normal. Throws DegenerateAverage for antipodal normal data.
PNMesh pn_refine_mesh(const PNMesh& mesh, const StencilSet& s);

/// Angle-weighted average of incident face normals. Existing nonzero normals
/// are kept unless `overwrite` is set.
PNMesh estimate_normals(const PNMesh& mesh, bool overwrite = false);

/// One refinement round; `round` counts from 0 and decides whether the
/// modified variants already use tuned stencils.
PNMesh refine_round(const PNMesh& mesh, SchemeKind scheme, Variant variant, int round, double kappa = 0.95);

/// Iterates refinement. `modified` and `pn-modified` apply eigenvalue-tuned
/// stencils around qualifying irregular vertices from the second round on and
/// are only defined for Catmull-Clark and Loop.
PNMesh subdivide_surface(const PNMesh& mesh, SchemeKind scheme, int levels, Variant variant,
                         double kappa = 0.95);

}  // namespace pnsubd
