#include <benchmark/benchmark.h>

#include "freeconv/family.hpp"
#include "freeconv/fid.hpp"
#include "freeconv/stieltjes.hpp"

using namespace freeconv;

namespace {

void BM_CauchyG(benchmark::State& state) {
  const FamilyParams p(1.5, std::polar(1.0, 0.25 * kPi), 1.2);
  const auto grid = cone_grid(default_cone(p), 256);
  for (auto _ : state) {
    Complex acc = 0.0;
    for (const Complex z : grid) acc += cauchy_G(p, z);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_CauchyG);

void BM_DensityFromG(benchmark::State& state) {
  const FamilyParams p(1.0, -1.0, 2.0);
  const ComplexFunction G = [p](Complex z) { return cauchy_G(p, z); };
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(density_from_G(G, x).value);
    x = x > 0.9 ? 0.1 : x + 0.01;
  }
}
BENCHMARK(BM_DensityFromG);

void BM_FidGrid(benchmark::State& state) {
  const FamilyParams p(1.0, Complex(0.0, 3.0), 3.0);
  GridSpec g = default_fid_grid(p);
  g.nx = static_cast<std::size_t>(state.range(0));
  g.ny = g.nx / 2;
  for (auto _ : state) benchmark::DoNotOptimize(check_fid_grid(p, g).max_im_phi);
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.nx * g.ny));
}
BENCHMARK(BM_FidGrid)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
