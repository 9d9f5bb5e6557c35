#include "countsim/skills.hpp"

namespace countsim {

SkillTriggers triggers_for(Skill skill) {
    switch (skill) {
    case Skill::DoNothing: return {false, false, false};
    case Skill::Pointing: return {true, true, false};
    case Skill::Recitation: return {false, false, true};
    case Skill::CountPoint: return {true, true, true};
    case Skill::CountNoPoint: return {true, false, true};
    case Skill::Puppet: return {true, false, true};
    }
    return {};
}

FeedbackPolicy feedback_for(Skill skill) {
    switch (skill) {
    case Skill::Pointing:
    case Skill::CountPoint: return FeedbackPolicy::NetworkHand;
    case Skill::Puppet: return FeedbackPolicy::ScriptedHand;
    default: return FeedbackPolicy::NoHand;
    }
}

std::optional<Skill> skill_from(SkillTriggers triggers, FeedbackPolicy feedback) {
    for (Skill s : kAllSkills)
        if (triggers_for(s) == triggers && feedback_for(s) == feedback) return s;
    return std::nullopt;
}

std::string_view skill_name(Skill skill) {
    switch (skill) {
    case Skill::DoNothing: return "do_nothing";
    case Skill::Pointing: return "pointing";
    case Skill::Recitation: return "recitation";
    case Skill::CountPoint: return "count_point";
    case Skill::CountNoPoint: return "count_nopoint";
    case Skill::Puppet: return "puppet";
    }
    return "unknown";
}

std::optional<Skill> skill_by_name(std::string_view name) {
    for (Skill s : kAllSkills)
        if (skill_name(s) == name) return s;
    return std::nullopt;
}

bool is_counting_skill(Skill skill) {
    return skill == Skill::CountPoint || skill == Skill::CountNoPoint || skill == Skill::Puppet;
}

} // namespace countsim
