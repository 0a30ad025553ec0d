// Serial reference kernels against their OpenMP counterparts on CVT meshes.
#include <map>
#include <memory>

#include <benchmark/benchmark.h>

#include "ipvem/cvt.hpp"
#include "ipvem/kernels.hpp"
#include "ipvem/system.hpp"
#include "ipvem/verify.hpp"

namespace {

using namespace ipvem;

struct Setup {
  PolygonalMesh mesh;
  GlobalDofMap dofs;
  std::vector<ElementContext> elements;
  std::vector<EdgeStencil> stencils;
  Eigen::VectorXd solution;

  explicit Setup(int n) : mesh(generate_cvt(n, 7, 50)), dofs(number_dofs(mesh, 2)) {
    elements = serial::build_elements(mesh, dofs);
    stencils = serial::build_stencils(mesh, elements, {2.0, mesh.max_edges_per_cell()});
    solution = Eigen::VectorXd::Zero(dofs.size());
    for (int i = 0; i < dofs.size(); ++i)
      if (!dofs.boundary[i]) solution[i] = 1e-3 * (i % 17);
  }
};

const Setup& setup(int n) {
  static std::map<int, std::unique_ptr<Setup>> cache;
  auto& s = cache[n];
  if (!s) s = std::make_unique<Setup>(n);
  return *s;
}

ScalarField load() {
  const auto u = example1();
  return [u](const Point& p) { return forcing(u, 1e-2, p); };
}

template <Exec E>
void BM_elements(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(build_elements(s.mesh, s.dofs, E));
}

template <Exec E>
void BM_stencils(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(build_stencils(s.mesh, s.elements, {2.0, s.mesh.max_edges_per_cell()}, E));
}

template <Exec E>
void BM_loads(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  const auto f = load();
  for (auto _ : st) benchmark::DoNotOptimize(build_loads(s.elements, f, 8, E));
}

template <Exec E>
void BM_entries(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(matrix_entries(s.dofs, s.elements, s.stencils, {1e-4, 1e-4, 1.0}, E));
}

template <Exec E>
void BM_errors(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  const auto u = example1();
  for (auto _ : st) benchmark::DoNotOptimize(cell_errors(s.elements, s.solution, u, 8, E));
}

#define IPVEM_BENCH(fn)                                                               \
  BENCHMARK(fn<Exec::serial>)->Name(#fn "/serial")->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond); \
  BENCHMARK(fn<Exec::parallel>)->Name(#fn "/omp")->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond)

IPVEM_BENCH(BM_elements);
IPVEM_BENCH(BM_stencils);
IPVEM_BENCH(BM_loads);
IPVEM_BENCH(BM_entries);
IPVEM_BENCH(BM_errors);

}  // namespace

BENCHMARK_MAIN();
