#include <pnsubd/eigentune.hpp>
#include <pnsubd/schemes.hpp>

#include <string>

namespace pnsubd {

namespace {

bool is_modified(Variant v) { return v == Variant::Modified || v == Variant::PNModified; }

void check_variant(SchemeKind scheme, Variant variant) {
  if (is_modified(variant) && scheme != SchemeKind::CatmullClark && scheme != SchemeKind::Loop) {
    throw Error(ErrorCode::UnsupportedVariant,
                std::string(variant_name(variant)) + " is defined for cc and loop only");
  }
}

}  // namespace

PNMesh refine_round(const PNMesh& mesh, SchemeKind scheme, Variant variant, int round, double kappa) {
  check_variant(scheme, variant);
  // The first round always uses classical rules; for Catmull-Clark this
  // leaves an all-quad mesh with isolated irregular vertices.
  const StencilSet s = is_modified(variant) && round > 0 ? modified_stencil_set(mesh, scheme, kappa)
                                                         : build_stencils(mesh, scheme);
  const bool pn = variant == Variant::PN || variant == Variant::PNModified;
  return pn ? pn_refine_mesh(mesh, s) : linear_refine_mesh(mesh, s);
}

PNMesh subdivide_surface(const PNMesh& mesh, SchemeKind scheme, int levels, Variant variant, double kappa) {
  if (levels < 0) throw Error(ErrorCode::InvalidArgument, "levels must be non-negative");
  check_variant(scheme, variant);
  PNMesh current = mesh;
  current.ensure_normal_slots();
  for (int level = 0; level < levels; ++level) current = refine_round(current, scheme, variant, level, kappa);
  return current;
}

}  // namespace pnsubd
