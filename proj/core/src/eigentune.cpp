#include <pnsubd/eigentune.hpp>
#include <pnsubd/curve.hpp>

#include "log.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <tuple>

namespace pnsubd {
namespace {

void require_supported(SchemeKind scheme) {
  if (scheme != SchemeKind::CatmullClark && scheme != SchemeKind::Loop) {
    throw Error(ErrorCode::UnsupportedScheme,
                "local matrices exist for cc and loop only, not " + std::string(scheme_name(scheme)));
  }
}

}  // namespace

PNMesh canonical_neighborhood(SchemeKind scheme, int valence) {
  require_supported(scheme);
  if (valence < 3) throw Error(ErrorCode::InvalidArgument, "valence must be at least 3");
  const int n = valence;
  PNMesh mesh;
  mesh.positions.push_back(Vec3::Zero());
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * i / n;
    mesh.positions.emplace_back(std::cos(t), std::sin(t), 0.0);
  }
  if (scheme == SchemeKind::CatmullClark) {
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * std::numbers::pi * (i + 0.5) / n;
      mesh.positions.emplace_back(1.5 * std::cos(t), 1.5 * std::sin(t), 0.0);
    }
    for (int i = 0; i < n; ++i) mesh.faces.push_back({0, 1 + i, 1 + n + i, 1 + (i + 1) % n});
  } else {
    for (int i = 0; i < n; ++i) mesh.faces.push_back({0, 1 + i, 1 + (i + 1) % n});
  }
  mesh.ensure_normal_slots();
  return mesh;
}

LocalConfig local_config(const PNMesh& mesh, const Topology& topo, int vertex, SchemeKind scheme) {
  require_supported(scheme);
  const VertexRing& ring = topo.ring(vertex);
  if (ring.boundary || ring.outgoing.size() < 3) {
    throw Error(ErrorCode::LayoutMismatch, "vertex " + std::to_string(vertex) + " is not an interior vertex");
  }
  const int arity = scheme == SchemeKind::CatmullClark ? 4 : 3;
  for (int f : ring.faces) {
    if (topo.face_size(f) != arity) {
      throw Error(ErrorCode::LayoutMismatch,
                  "faces around vertex " + std::to_string(vertex) + " do not match the scheme's layout");
    }
  }
  const int nv = static_cast<int>(mesh.vertex_count());
  const int ne = static_cast<int>(topo.edge_count());
  LocalConfig c;
  c.scheme = scheme;
  c.center = vertex;
  c.valence = ring.valence();
  c.ring_indices.push_back(vertex);
  c.new_rows.push_back(vertex);
  for (std::size_t i = 0; i < ring.outgoing.size(); ++i) {
    c.ring_indices.push_back(ring.neighbors[i]);
    c.new_rows.push_back(nv + ring.edges[i]);
  }
  if (scheme == SchemeKind::CatmullClark) {
    for (std::size_t i = 0; i < ring.outgoing.size(); ++i) {
      c.ring_indices.push_back(topo.target(topo.next(ring.outgoing[i])));
      c.new_rows.push_back(nv + ne + ring.faces[i]);
    }
  }
  std::vector<int> sorted = c.ring_indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::LayoutMismatch, "neighbourhood of vertex " + std::to_string(vertex) + " repeats a vertex");
  }
  return c;
}

Matrix assemble_local_matrix(SchemeKind scheme, int valence) {
  const PNMesh mesh = canonical_neighborhood(scheme, valence);
  const Topology topo(mesh);
  const StencilSet s = build_stencils(mesh, scheme);
  const LocalConfig c = local_config(mesh, topo, 0, scheme);
  const int size = static_cast<int>(c.ring_indices.size());
  std::vector<int> column(mesh.vertex_count(), -1);
  for (int i = 0; i < size; ++i) column[static_cast<std::size_t>(c.ring_indices[static_cast<std::size_t>(i)])] = i;

  Matrix m = Matrix::Zero(size, size);
  for (int r = 0; r < size; ++r) {
    for (const StencilTerm& t : s.stencils[static_cast<std::size_t>(c.new_rows[static_cast<std::size_t>(r)])]) {
      const int col = column[static_cast<std::size_t>(t.index)];
      if (col < 0) throw Error(ErrorCode::LayoutMismatch, "stencil leaves the canonical neighbourhood");
      m(r, col) += t.weight;
    }
  }
  return m;
}

EigenSpectrum spectrum(const Matrix& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "spectrum needs a non-empty square matrix");
  }
  Eigen::EigenSolver<Matrix> solver(matrix, true);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NotDiagonalizable, "eigen solver did not converge");
  const Eigen::VectorXcd vals = solver.eigenvalues();
  const Eigen::MatrixXcd vecs = solver.eigenvectors();
  const Eigen::Index size = vals.size();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(size));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = std::abs(vals[a]);
    const double mb = std::abs(vals[b]);
    if (std::abs(ma - mb) > 1e-12 * std::max(1.0, ma)) return ma > mb;
    if (vals[a].real() != vals[b].real()) return vals[a].real() > vals[b].real();
    return vals[a].imag() > vals[b].imag();
  });

  EigenSpectrum s;
  s.values.resize(size);
  s.right_vectors.resize(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    s.values[i] = vals[order[static_cast<std::size_t>(i)]];
    s.right_vectors.col(i) = vecs.col(order[static_cast<std::size_t>(i)]);
  }
  const std::complex<double> mean = s.right_vectors.col(0).mean();
  if (std::abs(mean) > 1e-300) s.right_vectors.col(0) /= mean;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s.right_vectors);
  const auto& sv = svd.singularValues();
  s.eigenvector_condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  s.diagonalizable = s.eigenvector_condition < 1e8;
  s.left_vectors = s.right_vectors.inverse();

  if (size > 1) s.subdominant = s.values[1].real();
  const double lambda2 = s.subdominant * s.subdominant;
  double tail = 0.0;
  for (Eigen::Index i = 3; i < size; ++i) tail = std::max(tail, std::abs(s.values[i]));
  s.condition_ratio = size > 3 && lambda2 > 0.0 ? tail / lambda2 : 0.0;
  return s;
}

Matrix tune(const Matrix& matrix, double kappa) {
  if (!(kappa > 0.0 && kappa <= 1.0)) throw Error(ErrorCode::InvalidArgument, "kappa must lie in (0, 1]");
  const EigenSpectrum s = spectrum(matrix);
  if (!s.diagonalizable) {
    throw Error(ErrorCode::NotDiagonalizable,
                "eigenvector condition number " + std::to_string(s.eigenvector_condition));
  }
  const Eigen::Index size = s.values.size();
  if (size <= 3) return matrix;
  if (std::abs(s.values[1] - s.values[2]) > 1e-8 || std::abs(s.values[1].imag()) > 1e-8) {
    throw Error(ErrorCode::InvalidArgument, "subdominant eigenvalue is not a real double eigenvalue");
  }
  const double bound = kappa * s.subdominant * s.subdominant;
  bool clamp = false;
  for (Eigen::Index i = 3; i < size; ++i) clamp = clamp || std::abs(s.values[i]) > bound * (1.0 + 1e-9);
  if (!clamp) return matrix;

  Eigen::VectorXcd values = s.values;
  for (Eigen::Index i = 3; i < size; ++i) {
    const double mod = std::abs(values[i]);
    if (mod > bound) values[i] *= bound / mod;
  }
  const Eigen::MatrixXcd rebuilt = s.right_vectors * values.asDiagonal() * s.left_vectors;
  const double imag = rebuilt.imag().cwiseAbs().maxCoeff();
  if (imag > 1e-9 * std::max(1.0, rebuilt.real().cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::ComplexClampFailure, "clamped reconstruction has imaginary part " + std::to_string(imag));
  }
  return rebuilt.real();
}

StencilFragment modified_stencils(const Matrix& tuned, const LocalConfig& config) {
  const auto size = static_cast<Eigen::Index>(config.ring_indices.size());
  if (tuned.rows() != size || tuned.cols() != size || config.new_rows.size() != config.ring_indices.size()) {
    throw Error(ErrorCode::LayoutMismatch, "tuned matrix is " + std::to_string(tuned.rows()) + "x" +
                                               std::to_string(tuned.cols()) + " but the neighbourhood has " +
                                               std::to_string(size) + " vertices");
  }
  StencilFragment out;
  out.reserve(config.new_rows.size());
  for (Eigen::Index r = 0; r < size; ++r) {
    StencilBuilder b;
    for (Eigen::Index c = 0; c < size; ++c) b.add(config.ring_indices[static_cast<std::size_t>(c)], tuned(r, c));
    out.emplace_back(config.new_rows[static_cast<std::size_t>(r)], std::move(b).build());
  }
  return out;
}

std::pair<Vec3, Vec3> limit_point_and_normal(std::span<const Vec3> neighborhood, const EigenSpectrum& spec,
                                             std::span<const Vec3> control_normals, const Vec3& orientation_hint) {
  const auto size = static_cast<Eigen::Index>(neighborhood.size());
  if (spec.left_vectors.rows() != size || size < 3) {
    throw Error(ErrorCode::LayoutMismatch, "neighbourhood size does not match the spectrum");
  }
  const Eigen::VectorXd w0 = spec.left_vectors.row(0).real().transpose();
  const double w0_sum = w0.sum();
  Vec3 p0 = Vec3::Zero();
  Vec3 p1 = Vec3::Zero();
  Vec3 p2 = Vec3::Zero();
  for (Eigen::Index i = 0; i < size; ++i) {
    const Vec3& q = neighborhood[static_cast<std::size_t>(i)];
    p0 += w0[i] / w0_sum * q;
    p1 += spec.left_vectors(1, i).real() * q;
    p2 += spec.left_vectors(2, i).real() * q;
  }
  Vec3 n = p1.cross(p2);
  const double len = n.norm();
  if (!(len > 1e-12 * p1.norm() * p2.norm()) || len == 0.0) {
    throw Error(ErrorCode::DegenerateTangents, "limit tangents are parallel");
  }
  n /= len;
  Vec3 reference = Vec3::Zero();
  for (const Vec3& c : control_normals) reference += c;
  if (is_zero(reference)) reference = orientation_hint;
  if (reference.dot(n) < 0.0) n = -n;
  return {p0, n};
}

std::pair<Vec3, Vec3> limit_at_vertex(const PNMesh& mesh, int vertex, SchemeKind scheme) {
  const Topology topo(mesh);
  const LocalConfig c = local_config(mesh, topo, vertex, scheme);
  const EigenSpectrum spec = spectrum(assemble_local_matrix(scheme, c.valence));
  std::vector<Vec3> q;
  std::vector<Vec3> normals;
  for (int i : c.ring_indices) {
    q.push_back(mesh.positions[static_cast<std::size_t>(i)]);
    if (static_cast<std::size_t>(i) < mesh.normals.size()) normals.push_back(mesh.normals[static_cast<std::size_t>(i)]);
  }
  Vec3 hint = Vec3::Zero();
  for (int f : topo.ring(vertex).faces) {
    const Face& face = mesh.faces[static_cast<std::size_t>(f)];
    for (std::size_t k = 0; k < face.size(); ++k) {
      hint += mesh.positions[static_cast<std::size_t>(face[k])].cross(
          mesh.positions[static_cast<std::size_t>(face[(k + 1) % face.size()])]);
    }
  }
  return limit_point_and_normal(q, spec, normals, hint);
}

namespace {

struct TunedCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, double>, std::unique_ptr<const Matrix>> entries;
};

TunedCache& tuned_cache() {
  static TunedCache cache;
  return cache;
}

}  // namespace

const Matrix& tuned_matrix(SchemeKind scheme, int valence, double kappa) {
  TunedCache& cache = tuned_cache();
  const auto key = std::make_tuple(static_cast<int>(scheme), valence, kappa);
  std::lock_guard lock(cache.mutex);
  auto it = cache.entries.find(key);
  if (it == cache.entries.end()) {
    auto m = std::make_unique<const Matrix>(tune(assemble_local_matrix(scheme, valence), kappa));
    it = cache.entries.emplace(key, std::move(m)).first;
  }
  return *it->second;
}

bool qualifies_for_tuning(SchemeKind scheme, int valence, double kappa) {
  require_supported(scheme);
  if (scheme == SchemeKind::CatmullClark && valence <= 4) return false;
  if (scheme == SchemeKind::Loop && valence >= 4 && valence <= 6) return false;
  // tune() returns its input untouched when no eigenvalue needs clamping.
  return tuned_matrix(scheme, valence, kappa) != assemble_local_matrix(scheme, valence);
}

StencilSet modified_stencil_set(const PNMesh& mesh, SchemeKind scheme, double kappa) {
  require_supported(scheme);
  StencilSet s = build_stencils(mesh, scheme);
  const Topology topo(mesh);
  const int arity = scheme == SchemeKind::CatmullClark ? 4 : 3;
  std::vector<bool> replaced(s.stencils.size(), false);
  for (int v = 0; v < static_cast<int>(mesh.vertex_count()); ++v) {
    const VertexRing& ring = topo.ring(v);
    if (ring.boundary || ring.outgoing.size() < 3) continue;
    if (!std::all_of(ring.faces.begin(), ring.faces.end(), [&](int f) { return topo.face_size(f) == arity; })) {
      continue;
    }
    if (!qualifies_for_tuning(scheme, ring.valence(), kappa)) continue;
    const LocalConfig config = local_config(mesh, topo, v, scheme);
    for (auto& [row, stencil] : modified_stencils(tuned_matrix(scheme, ring.valence(), kappa), config)) {
      if (replaced[static_cast<std::size_t>(row)]) {
        detail::logger()->warn("new vertex {} lies next to two tuned vertices; keeping the first rows", row);
        continue;
      }
      replaced[static_cast<std::size_t>(row)] = true;
      s.stencils[static_cast<std::size_t>(row)] = std::move(stencil);
    }
  }
  return s;
}

PNMesh pn_modified_refine(const PNMesh& mesh, SchemeKind scheme, double kappa) {
  return pn_refine_mesh(mesh, modified_stencil_set(mesh, scheme, kappa));
}

namespace {

double max_pairwise(const std::vector<Vec3>& n) {
  double d = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    for (std::size_t j = i + 1; j < n.size(); ++j) d = std::max(d, (n[i] - n[j]).norm());
  }
  return d;
}

}  // namespace

std::vector<double> projected_normal_spread(SchemeKind scheme, int valence, int levels,
                                            std::span<const Vec3> normals) {
  const Matrix s = assemble_local_matrix(scheme, valence);
  if (static_cast<Eigen::Index>(normals.size()) != s.rows()) {
    throw Error(ErrorCode::LayoutMismatch, "normal count does not match the neighbourhood");
  }
  std::vector<Vec3> current(normals.begin(), normals.end());
  std::vector<double> out{max_pairwise(current)};
  for (int level = 0; level < levels; ++level) {
    std::vector<Vec3> next(current.size(), Vec3::Zero());
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
      Vec3 sum = Vec3::Zero();
      for (Eigen::Index c = 0; c < s.cols(); ++c) sum += s(r, c) * current[static_cast<std::size_t>(c)];
      const double len = sum.norm();
      if (len < kDegenerateNormalNorm) throw Error(ErrorCode::DegenerateAverage, "normal average collapsed");
      next[static_cast<std::size_t>(r)] = sum / len;
    }
    current = std::move(next);
    out.push_back(max_pairwise(current));
  }
  return out;
}

std::vector<double> normal_decay_experiment(SchemeKind scheme, int valence, int levels, std::uint32_t seed,
                                            double spread) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> tilt(0.0, spread);
  std::uniform_real_distribution<double> azimuth(0.0, 2.0 * std::numbers::pi);
  const auto size = static_cast<std::size_t>(assemble_local_matrix(scheme, valence).rows());
  std::vector<Vec3> normals;
  for (std::size_t i = 0; i < size; ++i) {
    const double t = tilt(rng);
    const double a = azimuth(rng);
    normals.emplace_back(std::sin(t) * std::cos(a), std::sin(t) * std::sin(a), std::cos(t));
  }
  return projected_normal_spread(scheme, valence, levels, normals);
}

}  // namespace pnsubd
