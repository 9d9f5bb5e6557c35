#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "countsim/curriculum.hpp"
#include "countsim/geometry.hpp"
#include "countsim/posture.hpp"

namespace countsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Run configuration, read from flat `key = value` text. Unknown keys are
// rejected; every value is validated against the module invariants before a
// run starts. serialize() emits all keys, and that copy always lands next to
// the run outputs.
struct RunConfig {
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    int study = 3;
    std::string out_dir;
    int jobs = 1;
    int eval_every = 50;
    int checkpoint_every = 500;
    int test_batches = 50;

    int image_height = 40;
    int image_width = 134;
    int ball_radius = 3;

    int gesture_pre_iterations = 2000;
    int recitation_pre_iterations = 1000;
    int study1_iterations = 2000;
    int study2_iterations = 2000;
    int study3_iterations = 1050;

    double gesture_pre_gesture_lr = 0.004;
    double gesture_pre_number_lr = 0.0;
    double recitation_pre_number_lr = 0.002;
    double recitation_pre_gesture_lr = 0.001;
    double main_number_lr = 0.001;
    double main_gesture_lr = 0.002;

    // Batch update: gradients averaged over the batch's trials (or summed),
    // then applied by the chosen optimizer. "sgd" uses the gradient as-is,
    // "momentum" adds classical momentum, "adam" runs Adam with per-block
    // step sizes taken from the phase's per-head learning rates (heads step
    // at their own rate, shared blocks at the larger of the two).
    std::string batch_gradient = "mean"; // mean | sum
    std::string optimizer = "adam";      // adam | momentum | sgd
    double momentum = 0.9;

    std::string schedule_end = "paper"; // paper | alt
    CountingMix schedule_start_probs{0.6, 0.4, 0.0};
    CountingMix schedule_end_probs{0.1, 0.81, 0.09};
    bool schedule_probs_overridden = false;

    std::string hold_gesture = "hold"; // hold | base

    double posture_base_value = 0.1;
    std::array<double, kJointCount> posture_offsets = PostureSynthesis{}.offsets;
    std::array<double, kJointCount> posture_spans = PostureSynthesis{}.spans;
    double posture_width = PostureSynthesis{}.width;

    bool force_fresh = false;

    GridGeometry geometry() const;
    PostureSynthesis posture_synthesis() const;
    SkillSchedule schedule() const;
    HoldPolicy hold_policy() const;
    int study_iterations(int study_id) const;

    // Throws ConfigError describing the offending field.
    void validate() const;

    std::string serialize() const;

    void apply(const std::string& key, const std::string& value); // throws on unknown key
    static RunConfig from_file(const std::filesystem::path& path);
    static RunConfig from_string(const std::string& text);
};

} // namespace countsim
