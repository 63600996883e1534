#include <benchmark/benchmark.h>

#include "hxconv/quat.hpp"
#include "hxconv/raster.hpp"
#include "hxconv/scene.hpp"

using namespace hxconv;

namespace {

SceneSet three_ball_intersection() {
  SceneSet s;
  s.ambient_n = 1;
  s.root = scene_and({
      scene_ball({0.2, 0, 0, 0}, 0.8, Relation::kLE),
      scene_ball({-0.2, 0, 0, 0}, 0.8, Relation::kLE),
      scene_ball({0, 0.15, 0, 0}, 0.85, Relation::kLE),
  });
  s.bound = SceneBound{{0, 0, 0, 0}, 0.9};
  return s;
}

void BM_Rasterize(benchmark::State& state) {
  const SceneSet s = three_ball_intersection();
  const Frame f = Frame::canonical(1, {0, 1, 2, 3});
  const GridSpec g =
      make_cube_grid(4, -1.0, 1.0, static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rasterize(s, f, g));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(g.size()));
}

void BM_LineSection(benchmark::State& state) {
  const SceneSet s = three_ball_intersection();
  const HLine line{{Quaternion(0.05, 0.1, 0, 0)},
                   {Quaternion(0.3, -0.5, 0.2, 0.7)}};
  const GridSpec tg =
      make_cube_grid(4, -1.0, 1.0, static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(line_section(s, line, tg));
  }
}

void BM_ProjectImage(benchmark::State& state) {
  const SceneSet s = three_ball_intersection();
  const Frame f = Frame::canonical(1, {0, 1, 2, 3});
  const GridSpec g =
      make_cube_grid(4, -1.0, 1.0, static_cast<std::uint32_t>(state.range(0)));
  const Functional h = {Quaternion(0.6, 0.8, 0, 0)};
  const auto bbox = image_bbox(s, f, g, h, 2);
  const GridSpec ig = fit_image_grid(*bbox, 0.5 * g.axes[0].step());
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_scene_image(s, f, g, h, ig, 2));
  }
}

}  // namespace

BENCHMARK(BM_Rasterize)->Arg(11)->Arg(21)->Arg(31);
BENCHMARK(BM_LineSection)->Arg(13)->Arg(21);
BENCHMARK(BM_ProjectImage)->Arg(11)->Arg(15);

BENCHMARK_MAIN();
