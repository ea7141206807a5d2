#pragma once

// Local subdivision matrices around an extraordinary vertex, their spectra,
// eigenvalue tuning, and the modified refinement built from tuned matrices.
//
// Canonical neighbourhood layout (also used for LocalConfig::ring_indices):
//   Catmull-Clark: [center, e_0..e_{n-1}, f_0..f_{n-1}] where f_i is the
//   corner opposite the center in the quad between e_i and e_{i+1}.
//   Loop: [center, e_0..e_{n-1}].
// Neighbours are enumerated counter-clockwise around the center.

#include <pnsubd/schemes.hpp>
#include <pnsubd/topology.hpp>

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace pnsubd {

using Matrix = Eigen::MatrixXd;

struct EigenSpectrum {
  /// Sorted by decreasing modulus.
  Eigen::VectorXcd values;
  /// Columns are right eigenvectors; column 0 is scaled to all ones.
  Eigen::MatrixXcd right_vectors;
  /// Rows are left eigenvectors (the inverse of right_vectors).
  Eigen::MatrixXcd left_vectors;
  bool diagonalizable = false;
  double eigenvector_condition = 0.0;
  /// lambda_1.
  double subdominant = 0.0;
  /// max_{i >= 3} |mu_i| / lambda^2.
  double condition_ratio = 0.0;
};

/// The canonical one-ring neighbourhood of valence n as a mesh, laid out as above.
PNMesh canonical_neighborhood(SchemeKind scheme, int valence);

/// Rows of the scheme's own stencils restricted to the canonical
/// neighbourhood. Only Catmull-Clark and Loop are supported.
Matrix assemble_local_matrix(SchemeKind scheme, int valence);

EigenSpectrum spectrum(const Matrix& matrix);

/// Clamps every eigenvalue beyond the subdominant pair to modulus
/// kappa * lambda^2, keeping its phase. A matrix that already satisfies the
/// bound is returned unchanged.
Matrix tune(const Matrix& matrix, double kappa = 0.95);

struct LocalConfig {
  SchemeKind scheme = SchemeKind::CatmullClark;
  int center = -1;
  int valence = 0;
  /// Old vertex indices in canonical order.
  std::vector<int> ring_indices;
  /// New vertex indices (in the scheme's StencilSet) of the canonical rows.
  std::vector<int> new_rows;
};

/// Layout of the neighbourhood of `vertex`. Requires an interior vertex whose
/// incident faces are all quads (Catmull-Clark) or triangles (Loop).
LocalConfig local_config(const PNMesh& mesh, const Topology& topo, int vertex, SchemeKind scheme);

/// (new vertex index, stencil) pairs replacing the classical rows.
using StencilFragment = std::vector<std::pair<int, Stencil>>;
StencilFragment modified_stencils(const Matrix& tuned, const LocalConfig& config);

/// Limit position w_0^T Q and unit central normal along p_1 x p_2. The sign
/// follows the average of `control_normals` when it is nonzero, else
/// `orientation_hint`.
std::pair<Vec3, Vec3> limit_point_and_normal(std::span<const Vec3> neighborhood, const EigenSpectrum& spec,
                                             std::span<const Vec3> control_normals = {},
                                             const Vec3& orientation_hint = Vec3::Zero());

/// Limit point and normal at a mesh vertex using the gathered neighbourhood.
std::pair<Vec3, Vec3> limit_at_vertex(const PNMesh& mesh, int vertex, SchemeKind scheme);

/// Whether the scheme's stencils around valence n get tuned. Catmull-Clark:
/// n > 4; Loop: n outside 4..6; in both cases only if tuning changes the matrix.
bool qualifies_for_tuning(SchemeKind scheme, int valence, double kappa = 0.95);

/// Tuned local matrix, computed once per (scheme, valence, kappa).
const Matrix& tuned_matrix(SchemeKind scheme, int valence, double kappa = 0.95);

/// Classical stencils with every qualifying interior irregular vertex's
/// neighbourhood rows replaced by tuned ones.
StencilSet modified_stencil_set(const PNMesh& mesh, SchemeKind scheme, double kappa = 0.95);

/// One PN refinement round with modified stencils.
PNMesh pn_modified_refine(const PNMesh& mesh, SchemeKind scheme, double kappa = 0.95);

/// Projected refinement of neighbourhood normals with the local matrix:
/// N <- normalize_rows(S N). Returns the max pairwise distance between the
/// normals before the first and after every round.
std::vector<double> projected_normal_spread(SchemeKind scheme, int valence, int levels,
                                            std::span<const Vec3> normals);

/// projected_normal_spread on unit normals tilted randomly (up to `spread`
/// radians) away from +z, drawn from a seeded generator.
std::vector<double> normal_decay_experiment(SchemeKind scheme, int valence, int levels, std::uint32_t seed,
                                            double spread = 0.5);

}  // namespace pnsubd
