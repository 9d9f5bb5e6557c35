#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "countsim/config.hpp"
#include "countsim/phases.hpp"

namespace countsim {

// Correct-answer percentages of the 4-year-olds for small sets; overlay
// constants for the Study-3 comparison report.
inline constexpr double kChildrenPointPct = 82.5;
inline constexpr double kChildrenNoPointPct = 50.0;
inline constexpr double kChildrenPuppetPct = 77.5;

// Per-seed final counting accuracies keyed by counting skill.
using ConditionTable = std::map<Skill, std::vector<double>>;

ConditionTable condition_table(std::span<const SeedStudyResult> results);

// ANOVA + Tukey text over the three counting conditions. Deterministic
// formatting; recomputable bit-identically from conditions.csv.
std::string study_stats_text(const ConditionTable& table);

ConditionTable read_conditions_csv(const std::filesystem::path& path);

// Aggregated study artifacts: conditions.csv, final_eval_seed*.csv,
// curves.csv/.dat, gesture_curves.csv, stats.txt, bars.svg, curves.svg, and
// for Study 3 the children comparison report. Throws when fewer than 3 seeds
// succeeded.
void write_study_reports(const RunConfig& cfg, int study_id,
                         std::span<const SeedStudyResult> results,
                         const std::filesystem::path& dir);

} // namespace countsim
