#include "doctest.h"

#include <cmath>

#include "countsim/curriculum.hpp"
#include "countsim/scoring.hpp"

using namespace countsim;

namespace {

// Outputs that reproduce the trial's targets exactly.
std::vector<StepOutput> perfect_outputs(const Trial& trial, const PostureTable& table) {
    std::vector<StepOutput> outs(kTrialSteps);
    for (int s = 0; s < kTrialSteps; ++s) {
        StepOutput& o = outs[static_cast<std::size_t>(s)];
        o.number.assign(kNumberClasses, 0.02);
        o.number[trial.number_targets[static_cast<std::size_t>(s)]] = 0.8;
        o.gesture = table.by_id(trial.posture_targets[static_cast<std::size_t>(s)]);
    }
    return outs;
}

} // namespace

TEST_CASE("score_trial: exact outputs, single-step argmax flip") {
    const PostureTable table = PostureTable::make();
    Rng rng(1);
    const Trial trial = make_trial(Skill::CountPoint, 5, rng);
    auto outs = perfect_outputs(trial, table);

    TrialScore score = score_trial(outs, trial, table);
    CHECK(score.number_correct);
    CHECK(score.gesture_correct);
    CHECK(score.number_steps_correct == kTrialSteps);
    CHECK(score.gesture_steps_correct == kTrialSteps);
    CHECK(score.skill == Skill::CountPoint);
    CHECK(score.numerosity == 5);

    // One step's argmax off by one class fails the whole trial.
    outs[7].number[static_cast<std::size_t>(trial.number_targets[7])] = 0.1;
    outs[7].number[static_cast<std::size_t>(trial.number_targets[7] + 1)] = 0.85;
    score = score_trial(outs, trial, table);
    CHECK(!score.number_correct);
    CHECK(score.number_steps_correct == kTrialSteps - 1);
    CHECK(score.gesture_correct);
}

TEST_CASE("scoring is invariant to perturbations below the margins") {
    const PostureTable table = PostureTable::make();
    Rng rng(2);
    const double snap_margin = table.min_pairwise_distance() / 2.0;
    for (int rep = 0; rep < 50; ++rep) {
        const Skill skill = kCountingSkills[static_cast<std::size_t>(rng.below(3))];
        const Trial trial = make_trial(skill, 1 + rng.below(10), rng);
        auto outs = perfect_outputs(trial, table);
        const TrialScore before = score_trial(outs, trial, table);

        for (auto& o : outs) {
            // Number noise below half the argmax gap (0.8 vs 0.02).
            for (double& v : o.number) v += rng.uniform(-0.3, 0.3);
            // Gesture noise strictly below half the minimum posture distance.
            double dir[kJointCount];
            double norm = 0.0;
            for (double& d : dir) {
                d = rng.uniform(-1.0, 1.0);
                norm += d * d;
            }
            norm = std::sqrt(norm);
            const double radius = rng.uniform01() * 0.99 * snap_margin;
            for (int j = 0; j < kJointCount; ++j)
                o.gesture.joints[static_cast<std::size_t>(j)] += dir[j] / norm * radius;
        }
        const TrialScore after = score_trial(outs, trial, table);
        CHECK(after.number_correct == before.number_correct);
        CHECK(after.gesture_correct == before.gesture_correct);
    }
}

TEST_CASE("row bands classify scenes") {
    CHECK(scene_row_band(Scene::make({Ball{0, 0}, Ball{5, 1}})) == RowBand::Low);
    CHECK(scene_row_band(Scene::make({Ball{0, 3}, Ball{5, 4}})) == RowBand::High);
    CHECK(scene_row_band(Scene::make({Ball{0, 0}, Ball{5, 4}})) == RowBand::Mixed);
    CHECK(scene_row_band(Scene::make({Ball{2, 2}})) == RowBand::Mixed); // row 2: neither band
    CHECK(scene_row_band(Scene::make({})) == RowBand::Mixed);
}

TEST_CASE("condition_accuracy: mean and textbook CI") {
    const std::vector<double> two = {0.6, 0.8};
    const auto ci = condition_accuracy(two);
    CHECK(ci.mean == doctest::Approx(0.7));
    CHECK(ci.ci_defined);
    const std::vector<double> all = {1.0, 1.0, 1.0};
    const auto ones = condition_accuracy(all);
    CHECK(ones.mean == 1.0);
    CHECK(ones.ci_high - ones.ci_low == doctest::Approx(0.0));
    const std::vector<double> single = {0.4};
    CHECK(!condition_accuracy(single).ci_defined);
}

TEST_CASE("evaluate never mutates parameters and tallies per skill") {
    const GridGeometry g = tiny_geometry();
    const PostureTable table = PostureTable::make();
    Rng rng(3);
    const NetworkParams params = init_params(NetworkShape::for_geometry(g), rng);
    const NetworkParams before = params;

    Rng test_rng(4);
    const auto set = make_test_set(test_rng, 1); // 60 trials
    const EvalResult ev = evaluate(params, set, table, g, 42);
    CHECK(params == before);
    CHECK(ev.iteration == 42);
    CHECK(ev.by_skill.size() == 6);
    for (const auto& [skill, tally] : ev.by_skill) {
        CHECK(tally.trials == 10);
        CHECK(tally.number_accuracy() >= 0.0);
        CHECK(tally.number_accuracy() <= 1.0);
    }
    CHECK(ev.by_skill_numerosity.size() == 60);
}
