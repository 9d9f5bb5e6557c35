#include "countsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace countsim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config: " + key + " expects an integer, got '" + v + "'");
    }
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: " + key + " expects true/false, got '" + v + "'");
}

CountingMix parse_mix(const std::string& key, const std::string& v) {
    const auto parts = split_commas(v);
    if (parts.size() != 3)
        throw ConfigError("config: " + key + " expects puppet,point,nopoint");
    return CountingMix{parse_double(key, parts[0]), parse_double(key, parts[1]),
                       parse_double(key, parts[2])};
}

template <std::size_t N>
std::array<double, N> parse_array(const std::string& key, const std::string& v) {
    const auto parts = split_commas(v);
    if (parts.size() != N)
        throw ConfigError("config: " + key + " expects " + std::to_string(N) + " values");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = parse_double(key, parts[i]);
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt_mix(const CountingMix& m) {
    return fmt(m.puppet) + "," + fmt(m.point) + "," + fmt(m.nopoint);
}

template <std::size_t N>
std::string fmt_array(const std::array<double, N>& a) {
    std::string out;
    for (std::size_t i = 0; i < N; ++i) {
        if (i) out += ",";
        out += fmt(a[i]);
    }
    return out;
}

void check_mix(const char* what, const CountingMix& m) {
    if (m.puppet < 0 || m.point < 0 || m.nopoint < 0)
        throw ConfigError(std::string("config: ") + what + " has negative probabilities");
    if (std::fabs(m.sum() - 1.0) > 1e-9)
        throw ConfigError(std::string("config: ") + what + " probabilities must sum to 1");
}

} // namespace

GridGeometry RunConfig::geometry() const {
    GridGeometry g;
    g.image_height = image_height;
    g.image_width = image_width;
    g.ball_radius = ball_radius;
    return g;
}

PostureSynthesis RunConfig::posture_synthesis() const {
    PostureSynthesis s;
    s.base_value = posture_base_value;
    s.offsets = posture_offsets;
    s.spans = posture_spans;
    s.width = posture_width;
    return s;
}

SkillSchedule RunConfig::schedule() const {
    if (schedule_probs_overridden) return SkillSchedule{schedule_start_probs, schedule_end_probs};
    return schedule_end == "alt" ? SkillSchedule::alt() : SkillSchedule::paper();
}

HoldPolicy RunConfig::hold_policy() const {
    return hold_gesture == "base" ? HoldPolicy::ReturnToBase : HoldPolicy::HoldLast;
}

int RunConfig::study_iterations(int study_id) const {
    switch (study_id) {
    case 1: return study1_iterations;
    case 2: return study2_iterations;
    case 3: return study3_iterations;
    default: throw ConfigError("config: study must be 1, 2 or 3");
    }
}

void RunConfig::validate() const {
    if (seeds.empty()) throw ConfigError("config: seeds must not be empty");
    if (study < 1 || study > 3) throw ConfigError("config: study must be 1, 2 or 3");
    if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
    if (eval_every < 1) throw ConfigError("config: eval_every must be >= 1");
    if (checkpoint_every < 1) throw ConfigError("config: checkpoint_every must be >= 1");
    if (test_batches < 1) throw ConfigError("config: test_batches must be >= 1");
    for (int it : {gesture_pre_iterations, recitation_pre_iterations, study1_iterations,
                   study2_iterations, study3_iterations})
        if (it < 0) throw ConfigError("config: iteration counts must be >= 0");
    for (double lr : {gesture_pre_gesture_lr, gesture_pre_number_lr, recitation_pre_number_lr,
                      recitation_pre_gesture_lr, main_number_lr, main_gesture_lr})
        if (!(lr >= 0.0) || !std::isfinite(lr))
            throw ConfigError("config: learning rates must be finite and >= 0");
    if (batch_gradient != "mean" && batch_gradient != "sum")
        throw ConfigError("config: batch_gradient must be 'mean' or 'sum'");
    if (optimizer != "adam" && optimizer != "momentum" && optimizer != "sgd")
        throw ConfigError("config: optimizer must be 'adam', 'momentum' or 'sgd'");
    if (!(momentum >= 0.0) || momentum >= 1.0)
        throw ConfigError("config: momentum must be in [0, 1)");
    if (schedule_end != "paper" && schedule_end != "alt")
        throw ConfigError("config: schedule_end must be 'paper' or 'alt'");
    if (hold_gesture != "hold" && hold_gesture != "base")
        throw ConfigError("config: hold_gesture must be 'hold' or 'base'");
    const SkillSchedule sched = schedule();
    check_mix("schedule start", sched.start);
    check_mix("schedule end", sched.end);
    try {
        geometry().validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    try {
        PostureTable::make(posture_synthesis());
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: posture synthesis invalid: ") + e.what());
    }
}

std::string RunConfig::serialize() const {
    std::ostringstream out;
    out << "# countsim run configuration\n";
    out << "seeds = ";
    for (std::size_t i = 0; i < seeds.size(); ++i) out << (i ? "," : "") << seeds[i];
    out << "\n";
    out << "study = " << study << "\n";
    out << "out_dir = " << out_dir << "\n";
    out << "jobs = " << jobs << "\n";
    out << "eval_every = " << eval_every << "\n";
    out << "checkpoint_every = " << checkpoint_every << "\n";
    out << "test_batches = " << test_batches << "\n";
    out << "image_height = " << image_height << "\n";
    out << "image_width = " << image_width << "\n";
    out << "ball_radius = " << ball_radius << "\n";
    out << "gesture_pre_iterations = " << gesture_pre_iterations << "\n";
    out << "recitation_pre_iterations = " << recitation_pre_iterations << "\n";
    out << "study1_iterations = " << study1_iterations << "\n";
    out << "study2_iterations = " << study2_iterations << "\n";
    out << "study3_iterations = " << study3_iterations << "\n";
    out << "gesture_pre_gesture_lr = " << fmt(gesture_pre_gesture_lr) << "\n";
    out << "gesture_pre_number_lr = " << fmt(gesture_pre_number_lr) << "\n";
    out << "recitation_pre_number_lr = " << fmt(recitation_pre_number_lr) << "\n";
    out << "recitation_pre_gesture_lr = " << fmt(recitation_pre_gesture_lr) << "\n";
    out << "main_number_lr = " << fmt(main_number_lr) << "\n";
    out << "main_gesture_lr = " << fmt(main_gesture_lr) << "\n";
    out << "batch_gradient = " << batch_gradient << "\n";
    out << "optimizer = " << optimizer << "\n";
    out << "momentum = " << fmt(momentum) << "\n";
    out << "schedule_end = " << schedule_end << "\n";
    out << "schedule_start_probs = " << fmt_mix(schedule().start) << "\n";
    out << "schedule_end_probs = " << fmt_mix(schedule().end) << "\n";
    out << "hold_gesture = " << hold_gesture << "\n";
    out << "posture_base_value = " << fmt(posture_base_value) << "\n";
    out << "posture_offsets = " << fmt_array(posture_offsets) << "\n";
    out << "posture_width = " << fmt(posture_width) << "\n";
    out << "posture_spans = " << fmt_array(posture_spans) << "\n";
    out << "force_fresh = " << (force_fresh ? "true" : "false") << "\n";
    return out.str();
}

void RunConfig::apply(const std::string& key, const std::string& value) {
    if (key == "seeds") {
        seeds.clear();
        for (const std::string& s : split_commas(value)) {
            try {
                seeds.push_back(std::stoull(s));
            } catch (...) {
                throw ConfigError("config: seeds expects integers, got '" + s + "'");
            }
        }
    } else if (key == "study") {
        study = parse_int(key, value);
    } else if (key == "out_dir") {
        out_dir = value;
    } else if (key == "jobs") {
        jobs = parse_int(key, value);
    } else if (key == "eval_every") {
        eval_every = parse_int(key, value);
    } else if (key == "checkpoint_every") {
        checkpoint_every = parse_int(key, value);
    } else if (key == "test_batches") {
        test_batches = parse_int(key, value);
    } else if (key == "image_height") {
        image_height = parse_int(key, value);
    } else if (key == "image_width") {
        image_width = parse_int(key, value);
    } else if (key == "ball_radius") {
        ball_radius = parse_int(key, value);
    } else if (key == "gesture_pre_iterations") {
        gesture_pre_iterations = parse_int(key, value);
    } else if (key == "recitation_pre_iterations") {
        recitation_pre_iterations = parse_int(key, value);
    } else if (key == "study1_iterations") {
        study1_iterations = parse_int(key, value);
    } else if (key == "study2_iterations") {
        study2_iterations = parse_int(key, value);
    } else if (key == "study3_iterations") {
        study3_iterations = parse_int(key, value);
    } else if (key == "gesture_pre_gesture_lr") {
        gesture_pre_gesture_lr = parse_double(key, value);
    } else if (key == "gesture_pre_number_lr") {
        gesture_pre_number_lr = parse_double(key, value);
    } else if (key == "recitation_pre_number_lr") {
        recitation_pre_number_lr = parse_double(key, value);
    } else if (key == "recitation_pre_gesture_lr") {
        recitation_pre_gesture_lr = parse_double(key, value);
    } else if (key == "main_number_lr") {
        main_number_lr = parse_double(key, value);
    } else if (key == "main_gesture_lr") {
        main_gesture_lr = parse_double(key, value);
    } else if (key == "batch_gradient") {
        batch_gradient = value;
    } else if (key == "optimizer") {
        optimizer = value;
    } else if (key == "momentum") {
        momentum = parse_double(key, value);
    } else if (key == "schedule_end") {
        schedule_end = value;
    } else if (key == "schedule_start_probs") {
        schedule_start_probs = parse_mix(key, value);
        schedule_probs_overridden = true;
    } else if (key == "schedule_end_probs") {
        schedule_end_probs = parse_mix(key, value);
        schedule_probs_overridden = true;
    } else if (key == "hold_gesture") {
        hold_gesture = value;
    } else if (key == "posture_base_value") {
        posture_base_value = parse_double(key, value);
    } else if (key == "posture_width") {
        posture_width = parse_double(key, value);
    } else if (key == "posture_offsets") {
        posture_offsets = parse_array<static_cast<std::size_t>(kJointCount)>(key, value);
    } else if (key == "posture_spans") {
        posture_spans = parse_array<static_cast<std::size_t>(kJointCount)>(key, value);
    } else if (key == "force_fresh") {
        force_fresh = parse_bool(key, value);
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

RunConfig RunConfig::from_string(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) + " is not key = value");
        cfg.apply(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

} // namespace countsim
