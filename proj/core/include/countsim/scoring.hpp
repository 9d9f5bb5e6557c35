#pragma once

#include <map>
#include <span>
#include <vector>

#include "countsim/stats.hpp"
#include "countsim/trial.hpp"

namespace countsim {

// Distance bands of a scene: rows 0-1 (nearest the hand), rows 3-4, or mixed.
// Row 2 belongs to neither band.
enum class RowBand { Low, High, Mixed };

RowBand scene_row_band(const Scene& scene);

// A trial is correct only when every step is: the number head must hit the
// target class at all 15 steps, the gesture head must snap to the target
// posture identity at all 15 steps. Per-step counts are kept as diagnostics.
struct TrialScore {
    Skill skill = Skill::DoNothing;
    int numerosity = 0;
    RowBand row_band = RowBand::Mixed;
    bool number_correct = false;
    bool gesture_correct = false;
    int number_steps_correct = 0;
    int gesture_steps_correct = 0;
};

TrialScore score_trial(std::span<const StepOutput> outputs, const Trial& trial,
                       const PostureTable& table);

struct Tally {
    int trials = 0;
    int number_ok = 0;
    int gesture_ok = 0;
    long steps = 0;
    long number_steps_ok = 0;
    long gesture_steps_ok = 0;

    void add(const TrialScore& score);
    double number_accuracy() const { return trials ? static_cast<double>(number_ok) / trials : 0.0; }
    double gesture_accuracy() const { return trials ? static_cast<double>(gesture_ok) / trials : 0.0; }
    double number_step_accuracy() const {
        return steps ? static_cast<double>(number_steps_ok) / steps : 0.0;
    }
    double gesture_step_accuracy() const {
        return steps ? static_cast<double>(gesture_steps_ok) / steps : 0.0;
    }
};

struct EvalResult {
    int iteration = 0;
    std::map<Skill, Tally> by_skill;
    std::map<std::pair<Skill, int>, Tally> by_skill_numerosity;
};

// Scores the whole test set against fixed parameters (never mutates them).
EvalResult evaluate(const NetworkParams& params, std::span<const Trial> test_set,
                    const PostureTable& table, const GridGeometry& geometry, int iteration);

// Mean and t-based 95% CI of per-seed accuracies.
stats::MeanCi condition_accuracy(std::span<const double> per_seed_accuracy);

} // namespace countsim
