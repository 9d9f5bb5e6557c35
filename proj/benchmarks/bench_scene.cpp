#include <benchmark/benchmark.h>

#include "countsim/curriculum.hpp"

using namespace countsim;

namespace {

void BM_RenderSceneWithHand(benchmark::State& state) {
    const GridGeometry g = default_geometry();
    Rng rng(2);
    Scene scene = random_scene(7, rng);
    scene.visual_trigger = true;
    scene.hand = 4;
    for (auto _ : state) {
        const Image img = render(scene, g);
        benchmark::DoNotOptimize(img.pixels[0]);
    }
}

void BM_MakeTrainingBatch(benchmark::State& state) {
    Rng rng(3);
    const std::vector<Skill> skills(kAllSkills.begin(), kAllSkills.end());
    for (auto _ : state) {
        auto batch = make_training_batch(skills, rng);
        benchmark::DoNotOptimize(batch.size());
    }
    state.SetItemsProcessed(state.iterations() * 60);
}

} // namespace

BENCHMARK(BM_RenderSceneWithHand);
BENCHMARK(BM_MakeTrainingBatch);
