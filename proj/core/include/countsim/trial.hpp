#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "countsim/network.hpp"
#include "countsim/posture.hpp"
#include "countsim/scene.hpp"
#include "countsim/skills.hpp"

namespace countsim {

inline constexpr std::int8_t kNoHand = -1;

// One 15-step task instance: the scene, the constant trigger vector, and the
// per-step teaching signals. Posture targets and the scripted hand are stored
// as identities (base / column) and expanded against a PostureTable on use.
struct Trial {
    Skill skill = Skill::DoNothing;
    int numerosity = 0;
    Scene scene; // visual_trigger already set per skill; hand unset
    FeedbackPolicy feedback = FeedbackPolicy::NoHand;
    std::array<std::uint8_t, kTrialSteps> number_targets{};
    std::array<std::int8_t, kTrialSteps> posture_targets{}; // kBasePostureId or column
    std::array<std::int8_t, kTrialSteps> scripted_hand{};   // kNoHand or column
};

// What the pointing target (and the puppet hand) does after the last object:
// stay on it, or return to base.
enum class HoldPolicy { HoldLast, ReturnToBase };

// Builds the trial for a skill and numerosity. Counting and pointing skills
// require numerosity 1..10; DoNothing and Recitation accept 0..10.
Trial make_trial(Skill skill, int numerosity, Rng& rng, HoldPolicy hold = HoldPolicy::HoldLast);

// Same, but over a given scene (used by row-band-restricted test sets).
Trial make_trial_for_scene(Skill skill, Scene scene, HoldPolicy hold = HoldPolicy::HoldLast);

// Expands the stored targets for training.
std::array<StepTargets, kTrialSteps> trial_targets(const Trial& trial, const PostureTable& table);

// Line format for exact replay: skill, numerosity, ball coordinates, trigger.
std::string trial_to_line(const Trial& trial);
Trial trial_from_line(std::string_view line);

// Feeds a trial to the network, realizing the trial's feedback policy. Under
// NetworkHand the image of step t >= 1 is re-rendered with the hand at the
// snap of the previous gesture output (no hand when it snaps to base).
class TrialRunner final : public StepInputProvider {
public:
    TrialRunner(const Trial& trial, const PostureTable& table, const GridGeometry& geometry);

    StepInput step_input(int t, const StepOutput* previous) override;

private:
    const Trial& trial_;
    const PostureTable& table_;
    const GridGeometry& geometry_;
    SkillTriggers triggers_;
    Image image_;
    int current_hand_ = kNoHand - 1; // force first render
    void render_with_hand(int hand);
};

} // namespace countsim
