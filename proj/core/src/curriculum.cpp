#include "countsim/curriculum.hpp"

#include <stdexcept>

namespace countsim {

std::vector<Trial> make_training_batch(const std::vector<Skill>& skills, Rng& rng,
                                       HoldPolicy hold) {
    if (skills.empty()) throw std::invalid_argument("make_training_batch: no skills");
    std::vector<Trial> batch;
    batch.reserve(skills.size() * 10);
    for (Skill skill : skills)
        for (int n = 1; n <= 10; ++n) batch.push_back(make_trial(skill, n, rng, hold));
    return batch;
}

std::vector<Trial> make_test_set(Rng& rng, int batches, HoldPolicy hold) {
    std::vector<Trial> trials;
    trials.reserve(static_cast<std::size_t>(batches) * 60);
    const std::vector<Skill> all(kAllSkills.begin(), kAllSkills.end());
    for (int b = 0; b < batches; ++b) {
        std::vector<Trial> batch = make_training_batch(all, rng, hold);
        for (Trial& t : batch) trials.push_back(std::move(t));
    }
    return trials;
}

std::vector<Trial> make_row_band_test_set(Rng& rng, int batches, int row_lo, int row_hi,
                                          const std::vector<Skill>& skills, HoldPolicy hold) {
    std::vector<Trial> trials;
    trials.reserve(static_cast<std::size_t>(batches) * skills.size() * 10);
    for (int b = 0; b < batches; ++b)
        for (Skill skill : skills)
            for (int n = 1; n <= 10; ++n)
                trials.push_back(
                    make_trial_for_scene(skill, random_scene_rows(n, row_lo, row_hi, rng), hold));
    return trials;
}

CountingMix schedule_probabilities(const SkillSchedule& schedule, int iteration, int total) {
    if (total <= 0 || iteration < 0 || iteration > total)
        throw std::invalid_argument("schedule_probabilities: iteration outside [0, total]");
    const double a = static_cast<double>(iteration) / total;
    auto lerp = [a](double s, double e) { return s + (e - s) * a; };
    return CountingMix{lerp(schedule.start.puppet, schedule.end.puppet),
                       lerp(schedule.start.point, schedule.end.point),
                       lerp(schedule.start.nopoint, schedule.end.nopoint)};
}

Skill draw_counting_skill(const CountingMix& mix, Rng& rng) {
    const double u = rng.uniform01() * mix.sum();
    if (u < mix.puppet) return Skill::Puppet;
    if (u < mix.puppet + mix.point) return Skill::CountPoint;
    return Skill::CountNoPoint;
}

std::vector<Trial> make_study3_batch(const SkillSchedule& schedule, int iteration, int total,
                                     Rng& schedule_rng, Rng& data_rng, HoldPolicy hold) {
    const CountingMix mix = schedule_probabilities(schedule, iteration, total);
    const Skill counting = draw_counting_skill(mix, schedule_rng);
    std::vector<Skill> skills(kBaseSkills.begin(), kBaseSkills.end());
    skills.push_back(counting);
    return make_training_batch(skills, data_rng, hold);
}

} // namespace countsim
