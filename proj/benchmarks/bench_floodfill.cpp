#include <benchmark/benchmark.h>

#include "hxconv/hconv.hpp"
#include "hxconv/util.hpp"
#include "hxconv/voxel.hpp"

using namespace hxconv;

namespace {

VoxelSet random_interior(std::uint32_t cells, double density, std::uint64_t seed) {
  VoxelSet v(Frame::canonical(1, {0, 1, 2, 3}),
             make_cube_grid(4, -1.0, 1.0, cells));
  std::uint64_t st = seed;
  for (std::uint64_t lin = 0; lin < v.grid.size(); ++lin) {
    if (v.on_window_boundary(lin)) continue;
    if (u01(st) < density) v.bits.set(lin);
  }
  return v;
}

void BM_HCombinationRandom(benchmark::State& state) {
  const auto cells = static_cast<std::uint32_t>(state.range(0));
  const VoxelSet e = random_interior(cells, 0.25, 1234);
  for (auto _ : state) {
    benchmark::DoNotOptimize(h_combination(e));
  }
  state.SetComplexityN(static_cast<std::int64_t>(e.grid.size()));
}

void BM_HCombinationShell(benchmark::State& state) {
  // Worst-ish case: a hollow shell whose cavity must be flooded.
  const auto cells = static_cast<std::uint32_t>(state.range(0));
  VoxelSet v(Frame::canonical(1, {0, 1, 2, 3}),
             make_cube_grid(4, -1.0, 1.0, cells));
  const std::uint32_t c = cells / 2;
  const std::uint32_t outer = cells / 2 - 1;
  for (std::uint64_t lin = 0; lin < v.grid.size(); ++lin) {
    const auto idx = v.grid.multi_index(lin);
    std::uint32_t cheb = 0;
    for (std::size_t a = 0; a < 4; ++a) {
      const std::uint32_t d = idx[a] > c ? idx[a] - c : c - idx[a];
      cheb = cheb > d ? cheb : d;
    }
    if (cheb >= outer - 1 && cheb <= outer) v.bits.set(lin);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(h_combination(v));
  }
  state.SetComplexityN(static_cast<std::int64_t>(v.grid.size()));
}

}  // namespace

BENCHMARK(BM_HCombinationRandom)->Arg(7)->Arg(9)->Arg(13)->Arg(17)->Complexity();
BENCHMARK(BM_HCombinationShell)->Arg(9)->Arg(13)->Arg(17)->Arg(21)->Complexity();

BENCHMARK_MAIN();
