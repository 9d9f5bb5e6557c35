#pragma once

#include <vector>

#include "countsim/trial.hpp"

namespace countsim {

inline constexpr int kTestBatchCount = 50;

// One trial per (skill, numerosity 1..10), skill-major order, fresh random
// scenes. |skills| * 10 trials.
std::vector<Trial> make_training_batch(const std::vector<Skill>& skills, Rng& rng,
                                       HoldPolicy hold = HoldPolicy::HoldLast);

// `batches` batches of all six skills x numerosities 1..10 (60 trials each).
// The paper's protocol uses 50 batches (3000 trials).
std::vector<Trial> make_test_set(Rng& rng, int batches = kTestBatchCount,
                                 HoldPolicy hold = HoldPolicy::HoldLast);

// Same but with ball rows restricted to [row_lo, row_hi], for the distance
// analysis; only the listed skills are generated.
std::vector<Trial> make_row_band_test_set(Rng& rng, int batches, int row_lo, int row_hi,
                                          const std::vector<Skill>& skills,
                                          HoldPolicy hold = HoldPolicy::HoldLast);

// Probabilities of the counting sub-batch skill over a Study-3 run,
// interpolated linearly from start to end.
struct CountingMix {
    double puppet = 0.0;
    double point = 0.0;
    double nopoint = 0.0;

    double sum() const { return puppet + point + nopoint; }
};

struct SkillSchedule {
    CountingMix start{0.6, 0.4, 0.0};
    CountingMix end{0.1, 0.81, 0.09};

    static SkillSchedule paper() { return {}; }
    // Alternative reading of the target mix: no puppet at the end.
    static SkillSchedule alt() { return {{0.6, 0.4, 0.0}, {0.0, 0.9, 0.1}}; }
};

CountingMix schedule_probabilities(const SkillSchedule& schedule, int iteration, int total);

// Draws the counting skill for one Study-3 iteration from the mix.
Skill draw_counting_skill(const CountingMix& mix, Rng& rng);

// Study-3 batch: the three base skills always, plus one counting sub-batch of
// the drawn skill (40 trials).
std::vector<Trial> make_study3_batch(const SkillSchedule& schedule, int iteration, int total,
                                     Rng& schedule_rng, Rng& data_rng,
                                     HoldPolicy hold = HoldPolicy::HoldLast);

} // namespace countsim
