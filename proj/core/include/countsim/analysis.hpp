#pragma once

#include <filesystem>
#include <map>
#include <span>

#include "countsim/config.hpp"
#include "countsim/phases.hpp"

namespace countsim {

// Distance-to-objects comparison: test sets restricted to the two lowest rows
// (near the hand) vs the two highest rows, evaluated on trained parameters.
// Training is never restricted; row 2 belongs to neither band.
struct DistanceReport {
    std::vector<std::uint64_t> seeds;
    struct PerSkill {
        std::vector<double> low_accuracy;  // per seed
        std::vector<double> high_accuracy; // per seed
        stats::TTestResult test;           // unpaired, low vs high
    };
    std::map<Skill, PerSkill> by_skill; // CountPoint and Puppet
};

DistanceReport distance_analysis(const RunConfig& cfg,
                                 std::span<const NetworkParams> params_per_seed,
                                 std::span<const std::uint64_t> seeds);

void write_distance_reports(const DistanceReport& report, const std::filesystem::path& dir);

// Set-size comparison: accuracy per numerosity, grouped small (1-5) vs large
// (6-10), with unpaired t-tests across seeds per counting skill.
struct SetSizeReport {
    std::vector<std::uint64_t> seeds;
    struct PerSkill {
        std::array<stats::MeanCi, 10> per_numerosity; // index = numerosity - 1
        std::vector<double> small_accuracy;           // per seed, sets 1-5
        std::vector<double> large_accuracy;           // per seed, sets 6-10
        stats::TTestResult test;
    };
    std::map<Skill, PerSkill> by_skill;
};

SetSizeReport set_size_analysis(std::span<const SeedStudyResult> results);

void write_set_size_reports(const SetSizeReport& report, const std::filesystem::path& dir);

} // namespace countsim
