#include "countsim/trial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace countsim {

namespace {

bool needs_objects(Skill skill) {
    return skill == Skill::Pointing || is_counting_skill(skill);
}

} // namespace

Trial make_trial(Skill skill, int numerosity, Rng& rng, HoldPolicy hold) {
    if (numerosity < 0 || numerosity > 10)
        throw std::invalid_argument("make_trial: numerosity out of range");
    if (needs_objects(skill) && numerosity == 0)
        throw std::invalid_argument("make_trial: counting/pointing needs at least one object");
    return make_trial_for_scene(skill, random_scene(numerosity, rng), hold);
}

Trial make_trial_for_scene(Skill skill, Scene scene, HoldPolicy hold) {
    const int n = scene.numerosity();
    if (needs_objects(skill) && n == 0)
        throw std::invalid_argument("make_trial_for_scene: counting/pointing needs objects");

    Trial trial;
    trial.skill = skill;
    trial.numerosity = n;
    trial.feedback = feedback_for(skill);
    scene.visual_trigger = triggers_for(skill).visual;
    scene.hand.reset();
    trial.scene = std::move(scene);

    const std::vector<int> cols = trial.scene.columns_left_to_right();
    for (int s = 0; s < kTrialSteps; ++s) {
        const int step = s + 1; // 1-based position in the sequence
        int number = 0;
        switch (skill) {
        case Skill::DoNothing:
        case Skill::Pointing: number = 0; break;
        case Skill::Recitation: number = std::min(step, 10); break;
        default: number = std::min(step, n); break; // counting: hold the last word
        }
        trial.number_targets[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(number);

        const bool past_objects = s >= n && hold == HoldPolicy::ReturnToBase;

        std::int8_t posture = static_cast<std::int8_t>(kBasePostureId);
        if ((skill == Skill::Pointing || skill == Skill::CountPoint) && !past_objects)
            posture = static_cast<std::int8_t>(cols[static_cast<std::size_t>(std::min(s, n - 1))]);
        trial.posture_targets[static_cast<std::size_t>(s)] = posture;

        std::int8_t scripted = kNoHand;
        if (skill == Skill::Puppet && !past_objects)
            scripted = static_cast<std::int8_t>(cols[static_cast<std::size_t>(std::min(s, n - 1))]);
        trial.scripted_hand[static_cast<std::size_t>(s)] = scripted;
    }
    return trial;
}

std::array<StepTargets, kTrialSteps> trial_targets(const Trial& trial, const PostureTable& table) {
    std::array<StepTargets, kTrialSteps> targets;
    for (int s = 0; s < kTrialSteps; ++s) {
        targets[static_cast<std::size_t>(s)].number_class =
            trial.number_targets[static_cast<std::size_t>(s)];
        targets[static_cast<std::size_t>(s)].posture =
            table.by_id(trial.posture_targets[static_cast<std::size_t>(s)]);
    }
    return targets;
}

std::string trial_to_line(const Trial& trial) {
    std::ostringstream out;
    out << "skill=" << skill_name(trial.skill) << " n=" << trial.numerosity << " balls=";
    if (trial.scene.balls.empty()) out << "-";
    for (std::size_t i = 0; i < trial.scene.balls.size(); ++i) {
        if (i) out << ",";
        out << trial.scene.balls[i].column << ":" << trial.scene.balls[i].row;
    }
    return out.str();
}

Trial trial_from_line(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::string token;
    std::optional<Skill> skill;
    std::vector<Ball> balls;
    bool have_balls = false;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("trial_from_line: expected key=value, got '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "skill") {
            skill = skill_by_name(value);
            if (!skill) throw std::invalid_argument("trial_from_line: unknown skill " + value);
        } else if (key == "n") {
            // redundant with the ball list; accepted and cross-checked below
        } else if (key == "balls") {
            have_balls = true;
            if (value == "-") continue;
            std::istringstream bs(value);
            std::string item;
            while (std::getline(bs, item, ',')) {
                const auto colon = item.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("trial_from_line: bad ball '" + item + "'");
                balls.push_back(Ball{std::stoi(item.substr(0, colon)),
                                     std::stoi(item.substr(colon + 1))});
            }
        } else {
            throw std::invalid_argument("trial_from_line: unknown key " + key);
        }
    }
    if (!skill || !have_balls)
        throw std::invalid_argument("trial_from_line: missing skill or balls");
    return make_trial_for_scene(*skill, Scene::make(std::move(balls)));
}

TrialRunner::TrialRunner(const Trial& trial, const PostureTable& table,
                         const GridGeometry& geometry)
    : trial_(trial), table_(table), geometry_(geometry), triggers_(triggers_for(trial.skill)) {}

void TrialRunner::render_with_hand(int hand) {
    Scene scene = trial_.scene;
    if (hand != kNoHand) scene.hand = hand;
    image_ = render(scene, geometry_);
    current_hand_ = hand;
}

StepInput TrialRunner::step_input(int t, const StepOutput* previous) {
    int hand = kNoHand;
    switch (trial_.feedback) {
    case FeedbackPolicy::NoHand: break;
    case FeedbackPolicy::ScriptedHand:
        hand = trial_.scripted_hand[static_cast<std::size_t>(t)];
        break;
    case FeedbackPolicy::NetworkHand:
        // kBasePostureId == kNoHand: a gesture snapping to base shows no hand.
        if (t >= 1 && previous != nullptr) hand = snap_posture(previous->gesture, table_);
        break;
    }
    if (hand != current_hand_) render_with_hand(hand);
    return StepInput{&image_, triggers_.gesture ? 1.0 : 0.0, triggers_.number ? 1.0 : 0.0};
}

} // namespace countsim
