#include "fixtures.hpp"

#include <pnsubd/curve.hpp>
#include <pnsubd/eigentune.hpp>
#include <pnsubd/schemes.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace pnsubd;

namespace {

void BM_CatmullClark(benchmark::State& state, Variant variant) {
  const PNMesh base = estimate_normals(fixtures::cube());
  const int levels = static_cast<int>(state.range(0));
  std::size_t vertices = 0;
  for (auto _ : state) {
    PNMesh out = subdivide_surface(base, SchemeKind::CatmullClark, levels, variant);
    vertices = out.positions.size();
    benchmark::DoNotOptimize(out.positions.data());
  }
  state.counters["vertices"] = static_cast<double>(vertices);
}
BENCHMARK_CAPTURE(BM_CatmullClark, linear, Variant::Linear)->DenseRange(3, 5);
BENCHMARK_CAPTURE(BM_CatmullClark, pn, Variant::PN)->DenseRange(3, 5);
BENCHMARK_CAPTURE(BM_CatmullClark, pn_modified, Variant::PNModified)->DenseRange(3, 5);

void BM_Butterfly(benchmark::State& state) {
  const PNMesh base = fixtures::icosahedron();
  const int levels = static_cast<int>(state.range(0));
  for (auto _ : state) {
    PNMesh out = subdivide_surface(base, SchemeKind::Butterfly, levels, Variant::PN);
    benchmark::DoNotOptimize(out.positions.data());
  }
}
BENCHMARK(BM_Butterfly)->DenseRange(2, 4);

void BM_Curve(benchmark::State& state) {
  std::vector<double> angles;
  for (int i = 0; i < 16; ++i) angles.push_back(2.0 * std::numbers::pi * i / 16.0);
  const PNPolygon poly = fixtures::circle_polygon(angles);
  const int levels = static_cast<int>(state.range(0));
  for (auto _ : state) {
    PNPolygon out = subdivide_curve(poly, "6-point", levels, CurveVariant::PN);
    benchmark::DoNotOptimize(out.vertices.data());
  }
}
BENCHMARK(BM_Curve)->DenseRange(4, 8, 2);

void BM_Tune(benchmark::State& state) {
  const Matrix m = assemble_local_matrix(SchemeKind::CatmullClark, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Matrix t = tune(m);
    benchmark::DoNotOptimize(t.data());
  }
}
BENCHMARK(BM_Tune)->DenseRange(5, 12, 7);

}  // namespace

BENCHMARK_MAIN();
