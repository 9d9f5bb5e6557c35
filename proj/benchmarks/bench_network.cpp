#include <benchmark/benchmark.h>

#include "countsim/curriculum.hpp"
#include "countsim/phases.hpp"

using namespace countsim;

namespace {

struct Fixture {
    GridGeometry geometry;
    PostureTable table = PostureTable::make();
    NetworkParams params;
    Trial trial;

    explicit Fixture(const GridGeometry& g) : geometry(g) {
        Rng rng(1);
        params = init_params(NetworkShape::for_geometry(g), rng);
        trial = make_trial(Skill::CountPoint, 5, rng);
    }
};

Fixture& full() {
    static Fixture f(default_geometry());
    return f;
}

Fixture& reduced() {
    GridGeometry g;
    g.image_height = 12;
    g.image_width = 46;
    g.ball_radius = 1;
    static Fixture f(g);
    return f;
}

void run_forward(benchmark::State& state, Fixture& f) {
    for (auto _ : state) {
        TrialRunner runner(f.trial, f.table, f.geometry);
        auto seq = sequence_forward(f.params, runner, kTrialSteps, false);
        benchmark::DoNotOptimize(seq.outputs.back().number[0]);
    }
    state.SetItemsProcessed(state.iterations() * kTrialSteps);
}

void run_train_step(benchmark::State& state, Fixture& f) {
    Gradients grads = Gradients::zeros(f.params.shape);
    const auto targets = trial_targets(f.trial, f.table);
    for (auto _ : state) {
        TrialRunner runner(f.trial, f.table, f.geometry);
        auto seq = sequence_forward(f.params, runner, kTrialSteps, true);
        accumulate_sequence_gradients(f.params, seq.cache, targets, {0.001, 0.002}, grads);
        benchmark::DoNotOptimize(grads.conv_weights[0]);
    }
    state.SetItemsProcessed(state.iterations() * kTrialSteps);
}

void BM_SequenceForwardFull(benchmark::State& state) { run_forward(state, full()); }
void BM_SequenceForwardReduced(benchmark::State& state) { run_forward(state, reduced()); }
void BM_TrialGradientsFull(benchmark::State& state) { run_train_step(state, full()); }
void BM_TrialGradientsReduced(benchmark::State& state) { run_train_step(state, reduced()); }

} // namespace

BENCHMARK(BM_SequenceForwardFull);
BENCHMARK(BM_SequenceForwardReduced);
BENCHMARK(BM_TrialGradientsFull);
BENCHMARK(BM_TrialGradientsReduced);
