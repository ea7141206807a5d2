#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <span>
#include <vector>

namespace pnsubd {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// One affine weight of a refinement stencil.
struct StencilTerm {
  int index = 0;
  double weight = 0.0;

  friend bool operator==(const StencilTerm&, const StencilTerm&) = default;
};

/// Weights producing one new vertex from old vertices. Terms are sorted by
/// index with no duplicate indices once built through StencilBuilder.
using Stencil = std::vector<StencilTerm>;

double weight_sum(std::span<const StencilTerm> stencil);

/// Accumulates weighted contributions and merges repeated indices.
class StencilBuilder {
 public:
  StencilBuilder& add(int index, double weight);
  StencilBuilder& add(std::span<const StencilTerm> other, double scale);
  Stencil build() &&;

 private:
  std::vector<StencilTerm> terms_;
};

inline bool is_zero(const Vec3& v) { return v.x() == 0.0 && v.y() == 0.0 && v.z() == 0.0; }

}  // namespace pnsubd
