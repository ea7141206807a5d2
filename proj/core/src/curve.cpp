#include <pnsubd/curve.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace pnsubd {
namespace {

int floor_div(int a, int b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }
int ceil_div(int a, int b) { return -floor_div(-a, b); }

void check_affine(const Mask& mask) {
  if (!mask.affine()) {
    throw Error(ErrorCode::InvalidArgument, "mask is not affine (parity sums differ from 1)");
  }
}

}  // namespace

std::vector<Vec3> PNPolygon::positions() const {
  std::vector<Vec3> out;
  out.reserve(vertices.size());
  for (const auto& v : vertices) out.push_back(v.position);
  return out;
}

std::vector<Vec3> PNPolygon::normals() const {
  std::vector<Vec3> out;
  out.reserve(vertices.size());
  for (const auto& v : vertices) out.push_back(v.normal);
  return out;
}

PNPolygon PNPolygon::from(std::span<const Vec3> positions, std::span<const Vec3> normals,
                          bool closed) {
  if (!normals.empty() && normals.size() != positions.size()) {
    throw Error(ErrorCode::InvalidArgument, "normal count differs from point count");
  }
  PNPolygon poly;
  poly.closed = closed;
  poly.vertices.resize(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    poly.vertices[i].position = positions[i];
    if (!normals.empty()) poly.vertices[i].normal = normals[i];
  }
  return poly;
}

double RefinementContext::affine_defect() const {
  Mat3 sum = Mat3::Zero();
  for (std::size_t j = 0; j < M.size(); ++j) sum += weights[j] * M[j];
  return (sum - Mat3::Identity()).cwiseAbs().maxCoeff();
}

double pn_height(const Vec3& p_j, const Vec3& n_j, const Vec3& q, const Vec3& n_new) {
  Vec3 s = n_j + n_new;
  double den = s.dot(n_new);
  if (std::abs(den) < kHeightDenominatorGuard) {
    const Vec3 doubled = 2.0 * n_new;
    s = n_j + doubled;
    den = s.dot(doubled);
  }
  return s.dot(p_j - q) / den;
}

Vec3 project_average(std::span<const StencilTerm> stencil, std::span<const Vec3> normals,
                     DegeneratePolicy policy) {
  Vec3 sum = Vec3::Zero();
  bool any_zero = false;
  bool all_zero = true;
  for (const auto& t : stencil) {
    const Vec3& n = normals[static_cast<std::size_t>(t.index)];
    if (is_zero(n)) {
      any_zero = true;
    } else {
      all_zero = false;
      sum += t.weight * n;
    }
  }
  if (all_zero) return Vec3::Zero();
  const double l = sum.norm();
  if (l < kDegenerateNormalNorm) {
    if (any_zero || policy == DegeneratePolicy::ZeroNormal) return Vec3::Zero();
    throw Error(ErrorCode::DegenerateAverage,
                "averaged normal has norm " + std::to_string(l) + " (antipodal normal data?)");
  }
  return sum / l;
}

PointNormal pn_refine_vertex(std::span<const StencilTerm> stencil,
                             std::span<const StencilTerm> normal_stencil,
                             std::span<const Vec3> positions, std::span<const Vec3> normals,
                             RefinementContext* context) {
  Vec3 q = Vec3::Zero();
  for (const auto& t : stencil) q += t.weight * positions[static_cast<std::size_t>(t.index)];

  Vec3 n_sum = Vec3::Zero();
  for (const auto& t : normal_stencil) n_sum += t.weight * normals[static_cast<std::size_t>(t.index)];
  const Vec3 n_new = project_average(normal_stencil, normals, DegeneratePolicy::Throw);

  if (context) {
    *context = RefinementContext{};
    context->q = q;
    context->n_new = n_new;
    context->l = n_sum.norm();
  }
  if (is_zero(n_new)) return {q, Vec3::Zero()};

  double h_sum = 0.0;
  for (const auto& t : stencil) {
    const auto j = static_cast<std::size_t>(t.index);
    const double h = pn_height(positions[j], normals[j], q, n_new);
    h_sum += t.weight * h;
    if (context) {
      context->heights.push_back(h);
      context->weights.push_back(t.weight);
    }
  }

  if (context) {
    // A_j = n_new s_j^T / (s_j^T n_new), matching the guarded height formula.
    for (const auto& t : stencil) {
      const Vec3& n_j = normals[static_cast<std::size_t>(t.index)];
      Vec3 s = n_j + n_new;
      double den = s.dot(n_new);
      if (std::abs(den) < kHeightDenominatorGuard) {
        s = n_j + 2.0 * n_new;
        den = s.dot(2.0 * n_new);
      }
      context->A.push_back(n_new * s.transpose() / den);
    }
    Mat3 weighted_a = Mat3::Zero();
    for (std::size_t j = 0; j < stencil.size(); ++j) weighted_a += stencil[j].weight * context->A[j];
    double w_total = weight_sum(stencil);
    for (std::size_t j = 0; j < stencil.size(); ++j) {
      context->M.push_back(Mat3::Identity() + w_total * context->A[j] - weighted_a);
    }
  }
  return {q + h_sum * n_new, n_new};
}

std::vector<Stencil> curve_stencils(std::size_t count, const Mask& mask, bool closed) {
  check_affine(mask);
  const int n = static_cast<int>(count);
  const auto& sym = mask.symbol();
  const int lo = sym.offset();
  const int hi = sym.last();
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "a polygon needs at least 2 points");

  auto raw_terms = [&](int i) {
    std::vector<StencilTerm> terms;
    for (int j = ceil_div(i - hi, 2); j <= floor_div(i - lo, 2); ++j) {
      const double w = sym[i - 2 * j];
      if (w != 0.0) terms.push_back({j, w});
    }
    return terms;
  };

  std::vector<Stencil> out;
  if (closed) {
    out.reserve(count * 2);
    for (int i = 0; i < 2 * n; ++i) {
      StencilBuilder b;
      for (const auto& t : raw_terms(i)) b.add(((t.index % n) + n) % n, t.weight);
      out.push_back(std::move(b).build());
    }
    return out;
  }

  auto fits = [&](const std::vector<StencilTerm>& terms) {
    return std::all_of(terms.begin(), terms.end(),
                       [&](const StencilTerm& t) { return t.index >= 0 && t.index < n; });
  };

  if (mask.interpolatory()) {
    const int order = (1 - lo) / 2;
    for (int i = 0; i <= 2 * (n - 1); ++i) {
      auto terms = raw_terms(i);
      if (fits(terms)) {
        StencilBuilder b;
        for (const auto& t : terms) b.add(t.index, t.weight);
        out.push_back(std::move(b).build());
        continue;
      }
      // Odd output between old vertices m and m+1: shrink the Lagrange rule.
      const int m = (i - 1) / 2;
      const int reduced = std::max(1, std::min({order, m + 1, n - 1 - m}));
      const auto w = dd_midpoint_weights(reduced);
      StencilBuilder b;
      for (int k = -reduced + 1; k <= reduced; ++k) {
        b.add(m + k, w[static_cast<std::size_t>(k + reduced - 1)]);
      }
      out.push_back(std::move(b).build());
    }
    return out;
  }

  for (int i = lo; i <= 2 * (n - 1) + hi; ++i) {
    auto terms = raw_terms(i);
    if (terms.empty() || !fits(terms)) {
      if (!out.empty()) break;
      continue;
    }
    StencilBuilder b;
    for (const auto& t : terms) b.add(t.index, t.weight);
    out.push_back(std::move(b).build());
  }
  if (out.size() < 2) {
    throw Error(ErrorCode::TooFewPoints, "open polygon is shorter than the mask support");
  }
  return out;
}

std::vector<Vec3> linear_refine(std::span<const Vec3> points, const Mask& mask, bool closed) {
  const auto stencils = curve_stencils(points.size(), mask, closed);
  std::vector<Vec3> out;
  out.reserve(stencils.size());
  for (const auto& s : stencils) {
    Vec3 p = Vec3::Zero();
    for (const auto& t : s) p += t.weight * points[static_cast<std::size_t>(t.index)];
    out.push_back(p);
  }
  return out;
}

std::vector<Vec3> spherical_refine(std::span<const Vec3> normals, const Mask& mask, bool closed) {
  const auto stencils = curve_stencils(normals.size(), mask, closed);
  std::vector<Vec3> out;
  out.reserve(stencils.size());
  for (const auto& s : stencils) out.push_back(project_average(s, normals, DegeneratePolicy::Throw));
  return out;
}

PNPolygon pn_refine_curve(const PNPolygon& poly, const Mask& mask,
                          const std::optional<Mask>& normal_mask) {
  const auto positions = poly.positions();
  const auto normals = poly.normals();
  const auto stencils = curve_stencils(positions.size(), mask, poly.closed);
  std::vector<Stencil> normal_stencils;
  if (normal_mask) {
    normal_stencils = curve_stencils(positions.size(), *normal_mask, poly.closed);
    if (normal_stencils.size() != stencils.size()) {
      throw Error(ErrorCode::LayoutMismatch,
                  "normal mask yields a different number of refined vertices");
    }
  }
  PNPolygon out;
  out.closed = poly.closed;
  out.vertices.reserve(stencils.size());
  for (std::size_t i = 0; i < stencils.size(); ++i) {
    const Stencil& ns = normal_mask ? normal_stencils[i] : stencils[i];
    out.vertices.push_back(pn_refine_vertex(stencils[i], ns, positions, normals));
  }
  return out;
}

Mask curve_mask(std::string_view name) {
  auto parse_int = [&](std::string_view digits) -> int {
    int value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
      throw Error(ErrorCode::UnknownScheme, "unknown curve scheme '" + std::string(name) + "'");
    }
    return value;
  };
  if (name == "chaikin") return bspline_mask(2);
  if (name == "midpoint") return dd_interpolatory_mask(1);
  if (name.starts_with("bspline")) {
    std::string_view rest = name.substr(7);
    if (rest.starts_with("-") || rest.starts_with(":")) rest.remove_prefix(1);
    const int d = parse_int(rest);
    if (d < 1 || d > 15) throw Error(ErrorCode::UnknownScheme, "B-spline degree out of range");
    return bspline_mask(d);
  }
  for (std::string_view suffix : {"-point", "point", "pt"}) {
    if (name.ends_with(suffix)) {
      const int k = parse_int(name.substr(0, name.size() - suffix.size()));
      if (k < 2 || k % 2 != 0 || k > 20) {
        throw Error(ErrorCode::UnknownScheme, "2n-point schemes need an even point count in 2..20");
      }
      return dd_interpolatory_mask(k / 2);
    }
  }
  throw Error(ErrorCode::UnknownScheme, "unknown curve scheme '" + std::string(name) + "'");
}

CurveVariant parse_curve_variant(std::string_view name) {
  if (name == "linear") return CurveVariant::Linear;
  if (name == "pn") return CurveVariant::PN;
  throw Error(ErrorCode::UnsupportedVariant,
              "curve variant must be linear or pn, got '" + std::string(name) + "'");
}

PNPolygon subdivide_curve(const PNPolygon& poly, std::string_view scheme, int levels,
                          CurveVariant variant, const std::optional<Mask>& normal_mask) {
  if (levels < 0) throw Error(ErrorCode::InvalidArgument, "levels must be non-negative");
  const Mask mask = curve_mask(scheme);
  PNPolygon current = poly;
  for (int level = 0; level < levels; ++level) {
    if (variant == CurveVariant::PN) {
      current = pn_refine_curve(current, mask, normal_mask);
      continue;
    }
    const auto positions = current.positions();
    const auto normals = current.normals();
    const auto stencils = curve_stencils(positions.size(), mask, current.closed);
    const auto normal_stencils =
        normal_mask ? curve_stencils(positions.size(), *normal_mask, current.closed) : stencils;
    if (normal_stencils.size() != stencils.size()) {
      throw Error(ErrorCode::LayoutMismatch,
                  "normal mask yields a different number of refined vertices");
    }
    PNPolygon next;
    next.closed = current.closed;
    for (std::size_t i = 0; i < stencils.size(); ++i) {
      Vec3 p = Vec3::Zero();
      for (const auto& t : stencils[i]) p += t.weight * positions[static_cast<std::size_t>(t.index)];
      next.vertices.push_back(
          {p, project_average(normal_stencils[i], normals, DegeneratePolicy::ZeroNormal)});
    }
    current = std::move(next);
  }
  return current;
}

std::vector<double> curvature_comb(std::span<const Vec3> points, bool closed) {
  const std::size_t n = points.size();
  if (n < 3) throw Error(ErrorCode::TooFewPoints, "curvature comb needs at least 3 points");

  Vec3 reference = Vec3::Zero();
  const std::size_t first = closed ? 0 : 1;
  const std::size_t last = closed ? n : n - 1;
  for (std::size_t i = first; i < last; ++i) {
    const Vec3& prev = points[(i + n - 1) % n];
    const Vec3& next = points[(i + 1) % n];
    reference += (points[i] - prev).cross(next - points[i]);
  }

  std::vector<double> out;
  out.reserve(last - first);
  for (std::size_t i = first; i < last; ++i) {
    const Vec3 a = points[i] - points[(i + n - 1) % n];
    const Vec3 b = points[(i + 1) % n] - points[i];
    const Vec3 c = points[(i + 1) % n] - points[(i + n - 1) % n];
    const Vec3 cross = a.cross(b);
    const double denom = a.norm() * b.norm() * c.norm();
    if (cross.norm() == 0.0 || denom == 0.0) {
      out.push_back(0.0);
      continue;
    }
    const double kappa = 2.0 * cross.norm() / denom;
    out.push_back(cross.dot(reference) < 0.0 ? -kappa : kappa);
  }
  return out;
}

std::vector<Vec3> difference_tensor(std::span<const Vec3> points, int order, int level) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "difference order must be positive");
  if (points.size() <= static_cast<std::size_t>(order)) {
    throw Error(ErrorCode::TooFewPoints, "not enough points for the requested difference order");
  }
  std::vector<Vec3> d(points.begin(), points.end());
  for (int m = 0; m < order; ++m) {
    for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = d[i + 1] - d[i];
    d.pop_back();
  }
  const double scale = std::ldexp(1.0, level * order);
  for (auto& v : d) v *= scale;
  return d;
}

}  // namespace pnsubd
