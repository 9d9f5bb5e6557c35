#include "countsim/scoring.hpp"

namespace countsim {

RowBand scene_row_band(const Scene& scene) {
    if (scene.balls.empty()) return RowBand::Mixed;
    bool all_low = true, all_high = true;
    for (const Ball& b : scene.balls) {
        all_low = all_low && (b.row == 0 || b.row == 1);
        all_high = all_high && (b.row == 3 || b.row == 4);
    }
    if (all_low) return RowBand::Low;
    if (all_high) return RowBand::High;
    return RowBand::Mixed;
}

TrialScore score_trial(std::span<const StepOutput> outputs, const Trial& trial,
                       const PostureTable& table) {
    fatal_unless(outputs.size() == kTrialSteps, "score_trial: expected 15 outputs");
    TrialScore score;
    score.skill = trial.skill;
    score.numerosity = trial.numerosity;
    score.row_band = scene_row_band(trial.scene);
    for (int t = 0; t < kTrialSteps; ++t) {
        const StepOutput& out = outputs[static_cast<std::size_t>(t)];
        if (out.argmax_class() == trial.number_targets[static_cast<std::size_t>(t)])
            ++score.number_steps_correct;
        if (snap_posture(out.gesture, table) == trial.posture_targets[static_cast<std::size_t>(t)])
            ++score.gesture_steps_correct;
    }
    score.number_correct = score.number_steps_correct == kTrialSteps;
    score.gesture_correct = score.gesture_steps_correct == kTrialSteps;
    return score;
}

void Tally::add(const TrialScore& score) {
    ++trials;
    number_ok += score.number_correct ? 1 : 0;
    gesture_ok += score.gesture_correct ? 1 : 0;
    steps += kTrialSteps;
    number_steps_ok += score.number_steps_correct;
    gesture_steps_ok += score.gesture_steps_correct;
}

EvalResult evaluate(const NetworkParams& params, std::span<const Trial> test_set,
                    const PostureTable& table, const GridGeometry& geometry, int iteration) {
    EvalResult result;
    result.iteration = iteration;
    for (const Trial& trial : test_set) {
        TrialRunner runner(trial, table, geometry);
        const SequenceResult seq = sequence_forward(params, runner, kTrialSteps, false);
        const TrialScore score = score_trial(seq.outputs, trial, table);
        result.by_skill[trial.skill].add(score);
        result.by_skill_numerosity[{trial.skill, trial.numerosity}].add(score);
    }
    return result;
}

stats::MeanCi condition_accuracy(std::span<const double> per_seed_accuracy) {
    return stats::mean_ci95(per_seed_accuracy);
}

} // namespace countsim
