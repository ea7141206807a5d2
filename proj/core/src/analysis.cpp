#include <pnsubd/analysis.hpp>

#include "text_util.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace pnsubd {

PrimitiveKind parse_primitive(std::string_view name) {
  if (name == "circle") return PrimitiveKind::Circle;
  if (name == "sphere") return PrimitiveKind::Sphere;
  if (name == "cylinder") return PrimitiveKind::Cylinder;
  if (name == "torus") return PrimitiveKind::Torus;
  if (name == "plane") return PrimitiveKind::Plane;
  throw Error(ErrorCode::InvalidArgument, "unknown primitive '" + std::string(name) + "'");
}

std::string_view to_string(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::Circle: return "circle";
    case PrimitiveKind::Sphere: return "sphere";
    case PrimitiveKind::Cylinder: return "cylinder";
    case PrimitiveKind::Torus: return "torus";
    case PrimitiveKind::Plane: return "plane";
  }
  return "?";
}

double primitive_distance(PrimitiveKind kind, const PrimitiveParams& prm, const Vec3& p) {
  const Vec3 d = p - prm.center;
  const Vec3 a = prm.axis.normalized();
  const double axial = a.dot(d);
  const double radial = (d - axial * a).norm();
  switch (kind) {
    case PrimitiveKind::Sphere: return std::abs(d.norm() - prm.radius);
    case PrimitiveKind::Plane: return std::abs(axial);
    case PrimitiveKind::Cylinder: return std::abs(radial - prm.radius);
    case PrimitiveKind::Circle: return std::hypot(axial, radial - prm.radius);
    case PrimitiveKind::Torus: return std::abs(std::hypot(radial - prm.radius, axial) - prm.minor_radius);
  }
  return 0.0;
}

namespace {

struct Pca {
  Vec3 centroid;
  /// Columns sorted by increasing variance.
  Mat3 axes;
};

Pca pca(std::span<const Vec3> points) {
  Vec3 c = Vec3::Zero();
  for (const Vec3& p : points) c += p;
  c /= static_cast<double>(points.size());
  Mat3 cov = Mat3::Zero();
  for (const Vec3& p : points) cov += (p - c) * (p - c).transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
  return {c, es.eigenvectors()};
}

/// Algebraic circle fit in the plane through `origin` spanned by u, v.
std::pair<Vec3, double> kasa_circle(std::span<const Vec3> points, const Vec3& origin, const Vec3& u, const Vec3& v) {
  Eigen::MatrixXd a(points.size(), 3);
  Eigen::VectorXd b(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = u.dot(points[i] - origin);
    const double y = v.dot(points[i] - origin);
    a.row(static_cast<Eigen::Index>(i)) << 2 * x, 2 * y, 1.0;
    b[static_cast<Eigen::Index>(i)] = x * x + y * y;
  }
  const Eigen::Vector3d s = a.colPivHouseholderQr().solve(b);
  const double r2 = s[2] + s[0] * s[0] + s[1] * s[1];
  return {origin + s[0] * u + s[1] * v, std::sqrt(std::max(r2, 0.0))};
}

std::pair<Vec3, double> kasa_sphere(std::span<const Vec3> points) {
  Eigen::MatrixXd a(points.size(), 4);
  Eigen::VectorXd b(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3& p = points[i];
    a.row(static_cast<Eigen::Index>(i)) << 2 * p.x(), 2 * p.y(), 2 * p.z(), 1.0;
    b[static_cast<Eigen::Index>(i)] = p.squaredNorm();
  }
  const Eigen::Vector4d s = a.colPivHouseholderQr().solve(b);
  const Vec3 c = s.head<3>();
  return {c, std::sqrt(std::max(s[3] + c.squaredNorm(), 0.0))};
}

/// Parameter vector: center (3), axis (3), radius (1). The axis is
/// normalized inside the residual and penalized for drifting in length.
struct FitFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  std::span<const Vec3> points;
  PrimitiveKind kind;
  int extra;

  int inputs() const { return 7; }
  int values() const { return static_cast<int>(points.size()) + extra; }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    PrimitiveParams prm;
    prm.center = x.segment<3>(0);
    prm.axis = x.segment<3>(3);
    prm.radius = x[6];
    const double alen = prm.axis.norm();
    if (!(alen > 0.0)) prm.axis = Vec3::UnitZ();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Vec3 d = points[i] - prm.center;
      const Vec3 a = prm.axis.normalized();
      const double axial = a.dot(d);
      const Vec3 radial_vec = d - axial * a;
      const double radial = radial_vec.norm();
      double r = 0.0;
      if (kind == PrimitiveKind::Sphere) r = d.norm() - prm.radius;
      else if (kind == PrimitiveKind::Cylinder) r = radial - prm.radius;
      else r = std::hypot(axial, radial - prm.radius);
      f[static_cast<Eigen::Index>(i)] = r;
    }
    const auto n = static_cast<Eigen::Index>(points.size());
    if (extra >= 1) f[n] = alen - 1.0;
    // Pins the center of a cylinder to the foot of the axis through the origin.
    if (extra >= 2) f[n + 1] = prm.axis.normalized().dot(prm.center);
    return 0;
  }
};

PrimitiveParams refine(std::span<const Vec3> points, PrimitiveKind kind, const PrimitiveParams& start) {
  FitFunctor functor{points, kind, kind == PrimitiveKind::Sphere ? 0 : (kind == PrimitiveKind::Cylinder ? 2 : 1)};
  Eigen::NumericalDiff<FitFunctor> numeric(functor);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<FitFunctor>> lm(numeric);
  lm.parameters.xtol = 1e-15;
  lm.parameters.ftol = 1e-15;
  lm.parameters.maxfev = 4000;
  Eigen::VectorXd x(7);
  x << start.center, start.axis.normalized(), start.radius;
  const auto status = lm.minimize(x);
  if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters || !x.allFinite()) {
    throw Error(ErrorCode::FitDiverged, "least-squares fit of a " + std::string(to_string(kind)) + " diverged");
  }
  PrimitiveParams out;
  out.center = x.segment<3>(0);
  out.axis = x.segment<3>(3).normalized();
  out.radius = std::abs(x[6]);
  if (!out.axis.allFinite()) throw Error(ErrorCode::FitDiverged, "fitted axis degenerated");
  return out;
}

void fill_residuals(std::span<const Vec3> points, PrimitiveFit& fit) {
  double max_r = 0.0;
  double sum2 = 0.0;
  for (const Vec3& p : points) {
    const double r = primitive_distance(fit.kind, fit.params, p);
    max_r = std::max(max_r, r);
    sum2 += r * r;
  }
  fit.max_residual = max_r;
  fit.rms_residual = points.empty() ? 0.0 : std::sqrt(sum2 / static_cast<double>(points.size()));
}

std::size_t min_points(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::Circle: return 3;
    case PrimitiveKind::Sphere: return 4;
    case PrimitiveKind::Cylinder: return 6;
    case PrimitiveKind::Torus: return 8;
    case PrimitiveKind::Plane: return 3;
  }
  return 3;
}

}  // namespace

PrimitiveFit primitive_residual(std::span<const Vec3> points, PrimitiveKind kind,
                                const std::optional<PrimitiveParams>& params) {
  PrimitiveFit fit;
  fit.kind = kind;
  if (params) {
    fit.params = *params;
    fill_residuals(points, fit);
    return fit;
  }
  if (kind == PrimitiveKind::Torus) {
    throw Error(ErrorCode::InvalidArgument, "torus residuals need supplied parameters");
  }
  if (points.size() < min_points(kind)) {
    throw Error(ErrorCode::TooFewPoints, "fitting a " + std::string(to_string(kind)) + " needs at least " +
                                             std::to_string(min_points(kind)) + " points");
  }
  fit.fitted = true;
  const Pca basis = pca(points);
  switch (kind) {
    case PrimitiveKind::Plane:
      fit.params.center = basis.centroid;
      fit.params.axis = basis.axes.col(0);
      break;
    case PrimitiveKind::Sphere: {
      const auto [c, r] = kasa_sphere(points);
      fit.params = refine(points, kind, {c, Vec3::UnitZ(), r, 0.0});
      break;
    }
    case PrimitiveKind::Circle: {
      const Vec3 axis = basis.axes.col(0);
      const auto [c, r] = kasa_circle(points, basis.centroid, basis.axes.col(1), basis.axes.col(2));
      fit.params = refine(points, kind, {c, axis, r, 0.0});
      break;
    }
    case PrimitiveKind::Cylinder: {
      // Try each principal direction as the starting axis; keep the best.
      bool have = false;
      for (int k = 0; k < 3; ++k) {
        const Vec3 axis = basis.axes.col(k);
        const auto [c, r] = kasa_circle(points, basis.centroid, basis.axes.col((k + 1) % 3), basis.axes.col((k + 2) % 3));
        PrimitiveFit trial;
        trial.kind = kind;
        try {
          trial.params = refine(points, kind, {c, axis, r, 0.0});
        } catch (const Error&) {
          continue;
        }
        fill_residuals(points, trial);
        if (!have || trial.rms_residual < fit.rms_residual) {
          fit.params = trial.params;
          fit.rms_residual = trial.rms_residual;
          have = true;
        }
      }
      if (!have) throw Error(ErrorCode::FitDiverged, "no cylinder fit converged");
      break;
    }
    case PrimitiveKind::Torus: break;
  }
  fill_residuals(points, fit);
  return fit;
}

namespace {

double cot(const Vec3& a, const Vec3& b) {
  const double s = a.cross(b).norm();
  return s > 0.0 ? a.dot(b) / s : 0.0;
}

}  // namespace

CurvatureField discrete_curvature(const PNMesh& mesh) {
  const std::size_t nv = mesh.vertex_count();
  const auto& x = mesh.positions;

  std::vector<std::array<int, 3>> tris;
  std::unordered_map<std::uint64_t, int> edge_uses;
  auto key = [](int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(std::min(a, b))) << 32) |
           static_cast<std::uint32_t>(std::max(a, b));
  };
  for (const Face& f : mesh.faces) {
    for (std::size_t k = 0; k < f.size(); ++k) edge_uses[key(f[k], f[(k + 1) % f.size()])]++;
    if (f.size() == 3) {
      tris.push_back({f[0], f[1], f[2]});
    } else if (f.size() == 4) {
      const auto p = [&](int k) { return x[static_cast<std::size_t>(f[static_cast<std::size_t>(k)])]; };
      if ((p(0) - p(2)).squaredNorm() <= (p(1) - p(3)).squaredNorm()) {
        tris.push_back({f[0], f[1], f[2]});
        tris.push_back({f[0], f[2], f[3]});
      } else {
        tris.push_back({f[1], f[2], f[3]});
        tris.push_back({f[1], f[3], f[0]});
      }
    } else {
      for (std::size_t k = 1; k + 1 < f.size(); ++k) tris.push_back({f[0], f[k], f[k + 1]});
    }
  }

  CurvatureField field;
  field.gaussian.assign(nv, 0.0);
  field.mean.assign(nv, 0.0);
  field.area_weights.assign(nv, 0.0);
  field.defined.assign(nv, false);
  std::vector<double> angle_sum(nv, 0.0);
  std::vector<Vec3> laplace(nv, Vec3::Zero());
  std::vector<Vec3> normal(nv, Vec3::Zero());
  std::vector<bool> touched(nv, false);

  for (const auto& t : tris) {
    for (int c = 0; c < 3; ++c) {
      const auto i = static_cast<std::size_t>(t[static_cast<std::size_t>(c)]);
      const auto j = static_cast<std::size_t>(t[static_cast<std::size_t>((c + 1) % 3)]);
      const auto k = static_cast<std::size_t>(t[static_cast<std::size_t>((c + 2) % 3)]);
      const Vec3 eij = x[j] - x[i];
      const Vec3 eik = x[k] - x[i];
      angle_sum[i] += std::atan2(eij.cross(eik).norm(), eij.dot(eik));
      touched[i] = true;
      // Edge jk is opposite corner i.
      const double w = 0.5 * cot(eij, eik);
      laplace[j] += w * (x[k] - x[j]);
      laplace[k] += w * (x[j] - x[k]);
    }
    const auto a = static_cast<std::size_t>(t[0]);
    const auto b = static_cast<std::size_t>(t[1]);
    const auto c = static_cast<std::size_t>(t[2]);
    const Vec3 cross = (x[b] - x[a]).cross(x[c] - x[a]);
    const double area = 0.5 * cross.norm();
    for (auto v : {a, b, c}) normal[v] += cross;
    if (!(area > 0.0)) continue;
    const std::array<std::size_t, 3> ids{a, b, c};
    std::array<double, 3> ang{};
    for (int q = 0; q < 3; ++q) {
      const Vec3 u = x[ids[(q + 1) % 3]] - x[ids[q]];
      const Vec3 v = x[ids[(q + 2) % 3]] - x[ids[q]];
      ang[static_cast<std::size_t>(q)] = std::atan2(u.cross(v).norm(), u.dot(v));
    }
    const bool obtuse = *std::max_element(ang.begin(), ang.end()) > std::numbers::pi / 2;
    for (int q = 0; q < 3; ++q) {
      const auto qi = static_cast<std::size_t>(q);
      if (obtuse) {
        field.area_weights[ids[qi]] += ang[qi] > std::numbers::pi / 2 ? area / 2 : area / 4;
      } else {
        const Vec3 u = x[ids[(qi + 1) % 3]] - x[ids[qi]];
        const Vec3 v = x[ids[(qi + 2) % 3]] - x[ids[qi]];
        // Voronoi region: |u|^2 cot(angle opposite u) + |v|^2 cot(angle opposite v), over 8.
        field.area_weights[ids[qi]] +=
            (u.squaredNorm() / std::tan(ang[(qi + 2) % 3]) + v.squaredNorm() / std::tan(ang[(qi + 1) % 3])) / 8.0;
      }
    }
  }

  std::vector<bool> boundary(nv, false);
  for (const auto& [k, uses] : edge_uses) {
    if (uses != 2) boundary[k >> 32] = boundary[k & 0xffffffffu] = true;
  }
  for (std::size_t v = 0; v < nv; ++v) {
    const double area = field.area_weights[v];
    if (!touched[v] || boundary[v] || !(area > 0.0)) continue;
    field.defined[v] = true;
    field.gaussian[v] = (2.0 * std::numbers::pi - angle_sum[v]) / area;
    const Vec3 n = normal[v].norm() > 0.0 ? Vec3(normal[v].normalized()) : Vec3(Vec3::Zero());
    field.mean[v] = -0.5 * (laplace[v] / area).dot(n);
  }
  return field;
}

double decay_rate(std::span<const double> values) {
  if (values.size() < 4) throw Error(ErrorCode::TooFewPoints, "decay rate needs at least 4 values");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::NonPositiveEntry, "decay rate needs positive finite values");
    }
  }
  const std::size_t m = (values.size() + 1) / 2;
  const std::size_t first = values.size() - m;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = first; i < values.size(); ++i) {
    const double t = static_cast<double>(i - first);
    const double y = std::log(values[i]);
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
  }
  const double n = static_cast<double>(m);
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return std::exp(slope);
}

double compare_meshes(const PNMesh& a, const PNMesh& b) {
  if (a.vertex_count() != b.vertex_count() || a.faces != b.faces) {
    throw Error(ErrorCode::TopologyMismatch, "meshes have different connectivity");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.vertex_count(); ++i) d = std::max(d, (a.positions[i] - b.positions[i]).norm());
  return d;
}

double compare_normals(const PNMesh& a, const PNMesh& b) {
  if (a.vertex_count() != b.vertex_count() || a.faces != b.faces) {
    throw Error(ErrorCode::TopologyMismatch, "meshes have different connectivity");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.normals.size() && i < b.normals.size(); ++i) {
    d = std::max(d, (a.normals[i] - b.normals[i]).norm());
  }
  return d;
}

std::string format_fit(const PrimitiveFit& fit) {
  std::ostringstream out;
  const auto vec = [](const Vec3& v) {
    return detail::format_double(v.x()) + "," + detail::format_double(v.y()) + "," + detail::format_double(v.z());
  };
  out << "kind=" << to_string(fit.kind) << '\n'
      << "fitted=" << (fit.fitted ? "true" : "false") << '\n'
      << "center=" << vec(fit.params.center) << '\n';
  if (fit.kind != PrimitiveKind::Sphere) out << "axis=" << vec(fit.params.axis) << '\n';
  if (fit.kind != PrimitiveKind::Plane) out << "radius=" << detail::format_double(fit.params.radius) << '\n';
  if (fit.kind == PrimitiveKind::Torus) out << "minor_radius=" << detail::format_double(fit.params.minor_radius) << '\n';
  out << "max_residual=" << detail::format_double(fit.max_residual) << '\n'
      << "rms_residual=" << detail::format_double(fit.rms_residual) << '\n';
  return out.str();
}

std::string format_curvature_csv(const CurvatureField& field) {
  std::ostringstream out;
  out << "vertex_id,gaussian,mean\n";
  for (std::size_t v = 0; v < field.gaussian.size(); ++v) {
    if (!field.defined[v]) continue;
    out << v << ',' << detail::format_double(field.gaussian[v]) << ',' << detail::format_double(field.mean[v]) << '\n';
  }
  return out.str();
}

}  // namespace pnsubd
