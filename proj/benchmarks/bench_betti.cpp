#include <benchmark/benchmark.h>

#include "hxconv/cubical.hpp"
#include "hxconv/voxel.hpp"

using namespace hxconv;

namespace {

// Spherical shell: exercises reduction with nontrivial b0 and b3.
VoxelSet shell_set(std::uint32_t cells) {
  VoxelSet v(Frame::canonical(1, {0, 1, 2, 3}),
             make_cube_grid(4, -1.0, 1.0, cells));
  for (std::uint64_t lin = 0; lin < v.grid.size(); ++lin) {
    const auto p = v.center_local(lin);
    const double n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
    if (n2 >= 0.25 && n2 <= 0.64) v.bits.set(lin);
  }
  return v;
}

void BM_BettiShellMod2(benchmark::State& state) {
  const VoxelSet v = shell_set(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(betti_numbers(v, HomologyField::kMod2));
  }
  state.counters["set_cells"] = static_cast<double>(v.cell_count());
}

void BM_BettiShellRational(benchmark::State& state) {
  const VoxelSet v = shell_set(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(betti_numbers(v, HomologyField::kRational));
  }
  state.counters["set_cells"] = static_cast<double>(v.cell_count());
}

void BM_ComplexBuild(benchmark::State& state) {
  const VoxelSet v = shell_set(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_complex(v));
  }
}

}  // namespace

BENCHMARK(BM_BettiShellMod2)->Arg(9)->Arg(13)->Arg(17);
BENCHMARK(BM_BettiShellRational)->Arg(9)->Arg(13);
BENCHMARK(BM_ComplexBuild)->Arg(9)->Arg(13)->Arg(17)->Arg(21);

BENCHMARK_MAIN();
