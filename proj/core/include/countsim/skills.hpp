#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace countsim {

// The six simulated skills, numbered as in the experiments.
enum class Skill {
    DoNothing = 1,
    Pointing = 2,
    Recitation = 3,
    CountPoint = 4,
    CountNoPoint = 5,
    Puppet = 6,
};

inline constexpr std::array<Skill, 6> kAllSkills = {Skill::DoNothing,  Skill::Pointing,
                                                    Skill::Recitation, Skill::CountPoint,
                                                    Skill::CountNoPoint, Skill::Puppet};
inline constexpr std::array<Skill, 3> kBaseSkills = {Skill::DoNothing, Skill::Pointing,
                                                     Skill::Recitation};
inline constexpr std::array<Skill, 3> kCountingSkills = {Skill::CountPoint, Skill::CountNoPoint,
                                                         Skill::Puppet};

// The two trigger-vector units plus the in-image trigger line.
struct SkillTriggers {
    bool visual = false;
    bool gesture = false;
    bool number = false;

    bool operator==(const SkillTriggers&) const = default;
};

// How the hand gets into the visual input: not at all, from the network's own
// gesture output of the previous step, or scripted (puppet).
enum class FeedbackPolicy { NoHand, NetworkHand, ScriptedHand };

SkillTriggers triggers_for(Skill skill);
FeedbackPolicy feedback_for(Skill skill);

// Inverse of (triggers_for, feedback_for); the encoding is a bijection.
std::optional<Skill> skill_from(SkillTriggers triggers, FeedbackPolicy feedback);

std::string_view skill_name(Skill skill);
std::optional<Skill> skill_by_name(std::string_view name);

bool is_counting_skill(Skill skill);

} // namespace countsim
