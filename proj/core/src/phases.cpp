#include "countsim/phases.hpp"

#include <cstdio>
#include <fstream>
#include <thread>

#include "countsim/reports.hpp"

namespace countsim {

namespace {

std::uint64_t phase_tag(Phase phase) { return static_cast<std::uint64_t>(phase) + 1; }

void apply_optimizer_settings(PhaseConfig& p, const RunConfig& cfg) {
    p.average_batch = cfg.batch_gradient == "mean";
    p.optimizer = cfg.optimizer;
    p.momentum = cfg.momentum;
}

// Adam state and per-block step sizes. Head blocks step at their own
// published per-head rate; shared blocks at the larger of the two (the
// relative weighting of the two losses is already inside the gradients).
struct AdamState {
    Gradients m;
    Gradients v;
    long t = 0;
    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEps = 1e-8;

    explicit AdamState(const NetworkShape& shape)
        : m(Gradients::zeros(shape)), v(Gradients::zeros(shape)) {}

    void step_block(std::vector<double>& grad, std::vector<double>& m_b, std::vector<double>& v_b,
                    double alpha) const {
        const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t));
        for (std::size_t i = 0; i < grad.size(); ++i) {
            m_b[i] = kBeta1 * m_b[i] + (1.0 - kBeta1) * grad[i];
            v_b[i] = kBeta2 * v_b[i] + (1.0 - kBeta2) * grad[i] * grad[i];
            const double mh = m_b[i] / c1;
            const double vh = v_b[i] / c2;
            grad[i] = alpha * mh / (std::sqrt(vh) + kEps);
        }
    }

    // Rewrites `grads` into the update step.
    void step(Gradients& grads, HeadRates rates) {
        ++t;
        // Shared blocks follow the gentler of the two active head rates.
        double shared = std::max(rates.number_lr, rates.gesture_lr);
        if (rates.number_lr > 0.0 && rates.gesture_lr > 0.0)
            shared = std::min(rates.number_lr, rates.gesture_lr);
        step_block(grads.conv_weights, m.conv_weights, v.conv_weights, shared);
        step_block(grads.conv_bias, m.conv_bias, v.conv_bias, shared);
        step_block(grads.dense3_weights, m.dense3_weights, v.dense3_weights, shared);
        step_block(grads.dense3_bias, m.dense3_bias, v.dense3_bias, shared);
        step_block(grads.dense4_weights, m.dense4_weights, v.dense4_weights, shared);
        step_block(grads.dense4_bias, m.dense4_bias, v.dense4_bias, shared);
        step_block(grads.number_weights, m.number_weights, v.number_weights, rates.number_lr);
        step_block(grads.number_bias, m.number_bias, v.number_bias, rates.number_lr);
        step_block(grads.gesture_weights, m.gesture_weights, v.gesture_weights, rates.gesture_lr);
        step_block(grads.gesture_bias, m.gesture_bias, v.gesture_bias, rates.gesture_lr);
    }
};

template <typename F>
void for_each_block(Gradients& g, F&& f) {
    f(g.conv_weights);
    f(g.conv_bias);
    f(g.dense3_weights);
    f(g.dense3_bias);
    f(g.dense4_weights);
    f(g.dense4_bias);
    f(g.number_weights);
    f(g.number_bias);
    f(g.gesture_weights);
    f(g.gesture_bias);
}

std::string iter_checkpoint_name(const std::string& prefix, int iteration) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_iter%06d", iteration);
    return prefix + buf + ".ckpt";
}

} // namespace

std::string_view phase_name(Phase phase) {
    switch (phase) {
    case Phase::GesturePre: return "gesture_pretraining";
    case Phase::RecitationPre: return "recitation_pretraining";
    case Phase::Study1: return "study1";
    case Phase::Study2: return "study2";
    case Phase::Study3: return "study3";
    }
    return "unknown";
}

PhaseConfig PhaseConfig::gesture_pretraining(const RunConfig& cfg) {
    PhaseConfig p;
    p.phase = Phase::GesturePre;
    p.iterations = cfg.gesture_pre_iterations;
    p.skills = {Skill::DoNothing, Skill::Pointing};
    p.rates = {cfg.gesture_pre_number_lr, cfg.gesture_pre_gesture_lr};
    p.mask = TrainedMask::gesture_pretraining();
    p.eval_every = cfg.eval_every;
    p.checkpoint_every = cfg.checkpoint_every;
    p.hold = cfg.hold_policy();
    apply_optimizer_settings(p, cfg);
    return p;
}

PhaseConfig PhaseConfig::recitation_pretraining(const RunConfig& cfg) {
    PhaseConfig p;
    p.phase = Phase::RecitationPre;
    p.iterations = cfg.recitation_pre_iterations;
    p.skills = {Skill::DoNothing, Skill::Pointing, Skill::Recitation};
    p.rates = {cfg.recitation_pre_number_lr, cfg.recitation_pre_gesture_lr};
    p.mask = TrainedMask::all();
    p.eval_every = cfg.eval_every;
    p.checkpoint_every = cfg.checkpoint_every;
    p.hold = cfg.hold_policy();
    apply_optimizer_settings(p, cfg);
    return p;
}

PhaseConfig PhaseConfig::study(int study_id, const RunConfig& cfg) {
    PhaseConfig p;
    p.iterations = cfg.study_iterations(study_id);
    p.rates = {cfg.main_number_lr, cfg.main_gesture_lr};
    p.mask = TrainedMask::all();
    p.eval_every = cfg.eval_every;
    p.checkpoint_every = cfg.checkpoint_every;
    p.hold = cfg.hold_policy();
    apply_optimizer_settings(p, cfg);
    switch (study_id) {
    case 1:
        p.phase = Phase::Study1;
        p.skills = {Skill::DoNothing, Skill::Pointing, Skill::Recitation, Skill::CountPoint};
        break;
    case 2:
        p.phase = Phase::Study2;
        p.skills.assign(kAllSkills.begin(), kAllSkills.end());
        break;
    case 3:
        p.phase = Phase::Study3;
        p.schedule = cfg.schedule();
        break;
    default: throw ConfigError("study must be 1, 2 or 3");
    }
    return p;
}

const EvalResult& RunRecord::final_eval() const {
    fatal_unless(!evals.empty(), "RunRecord: no evaluations recorded");
    return evals.back();
}

RunRecord run_phase(NetworkParams& params, const PhaseConfig& config, std::uint64_t seed,
                    std::span<const Trial> test_set, const PostureTable& table,
                    const GridGeometry& geometry, const PhaseSinks* sinks) {
    RunRecord record;
    record.seed = seed;
    record.phase = config.phase;

    Rng data_rng(derive_seed(seed, stream::kTrain, phase_tag(config.phase)));
    Rng schedule_rng(derive_seed(seed, stream::kSchedule, phase_tag(config.phase)));
    const int schedule_total = std::max(config.iterations - 1, 1);

    Gradients grads = Gradients::zeros(params.shape);
    Gradients velocity = Gradients::zeros(params.shape);
    AdamState adam(params.shape);
    auto zero = [](std::vector<double>& v) { std::fill(v.begin(), v.end(), 0.0); };

    for (int iteration = 1; iteration <= config.iterations; ++iteration) {
        std::vector<Trial> batch =
            config.schedule
                ? make_study3_batch(*config.schedule, iteration - 1, schedule_total, schedule_rng,
                                    data_rng, config.hold)
                : make_training_batch(config.skills, data_rng, config.hold);

        for_each_block(grads, zero);

        for (const Trial& trial : batch) {
            TrialRunner runner(trial, table, geometry);
            const SequenceResult seq = sequence_forward(params, runner, kTrialSteps, true);
            const auto targets = trial_targets(trial, table);
            accumulate_sequence_gradients(params, seq.cache, targets, config.rates, grads);
        }
        if (!grads.all_finite()) throw TrainingDivergence(config.phase, iteration);
        if (config.average_batch) {
            const double inv = 1.0 / static_cast<double>(batch.size());
            for_each_block(grads, [inv](std::vector<double>& v) {
                for (double& x : v) x *= inv;
            });
        }
        if (config.optimizer == "adam") {
            adam.step(grads, config.rates);
        } else if (config.optimizer == "momentum" && config.momentum > 0.0) {
            double* vel[10];
            int vi = 0;
            for_each_block(velocity, [&vel, &vi](std::vector<double>& v) { vel[vi++] = v.data(); });
            vi = 0;
            const double beta = config.momentum;
            for_each_block(grads, [&vel, &vi, beta](std::vector<double>& v) {
                double* w = vel[vi++];
                for (std::size_t i = 0; i < v.size(); ++i) {
                    w[i] = beta * w[i] + v[i];
                    v[i] = w[i];
                }
            });
        }
        apply_gradients(params, grads, config.mask);

        const bool last = iteration == config.iterations;
        if (iteration % config.eval_every == 0 || last)
            record.evals.push_back(evaluate(params, test_set, table, geometry, iteration));

        if (sinks && !sinks->checkpoint_dir.empty() && !last &&
            iteration % config.checkpoint_every == 0)
            save_checkpoint(params, sinks->checkpoint_dir /
                                        iter_checkpoint_name(sinks->checkpoint_prefix, iteration));
    }

    if (sinks) {
        if (!sinks->metrics_csv.empty()) write_metrics_csv(record, sinks->metrics_csv);
        if (!sinks->checkpoint_dir.empty())
            save_checkpoint(params, sinks->checkpoint_dir / (sinks->checkpoint_prefix + ".ckpt"));
    }
    return record;
}

void write_metrics_csv(const RunRecord& record, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write metrics csv: " + path.string());
    out << "iteration,skill,number_accuracy,gesture_accuracy,number_step_accuracy,gesture_step_"
           "accuracy\n";
    char buf[256];
    for (const EvalResult& ev : record.evals)
        for (const auto& [skill, tally] : ev.by_skill) {
            std::snprintf(buf, sizeof buf, "%d,%s,%.6f,%.6f,%.6f,%.6f\n", ev.iteration,
                          std::string(skill_name(skill)).c_str(), tally.number_accuracy(),
                          tally.gesture_accuracy(), tally.number_step_accuracy(),
                          tally.gesture_step_accuracy());
            out << buf;
        }
}

PretrainResult run_pretraining(const RunConfig& cfg, std::uint64_t seed,
                               const std::filesystem::path& out_root) {
    const GridGeometry geometry = cfg.geometry();
    const PostureTable table = PostureTable::make(cfg.posture_synthesis());
    const NetworkShape shape = NetworkShape::for_geometry(geometry);

    Rng init_rng(derive_seed(seed, stream::kInit));
    PretrainResult result{init_params(shape, init_rng), {}, {}, {}, {}};

    Rng test_rng(derive_seed(seed, stream::kTest));
    const std::vector<Trial> test_set = make_test_set(test_rng, cfg.test_batches,
                                                      cfg.hold_policy());

    std::filesystem::path dir;
    const bool sink = !out_root.empty();
    if (sink) {
        dir = out_root / "pretrain";
        std::filesystem::create_directories(dir);
    }
    const std::string seed_tag = "seed" + std::to_string(seed);

    PhaseSinks gesture_sinks{sink ? dir / ("metrics_gesture_" + seed_tag + ".csv") : "",
                             sink ? dir : std::filesystem::path{}, "gesture_" + seed_tag};
    result.gesture = run_phase(result.params, PhaseConfig::gesture_pretraining(cfg), seed,
                               test_set, table, geometry, sink ? &gesture_sinks : nullptr);
    if (sink) result.gesture_checkpoint = dir / ("gesture_" + seed_tag + ".ckpt");

    PhaseSinks recitation_sinks{sink ? dir / ("metrics_recitation_" + seed_tag + ".csv") : "",
                                sink ? dir : std::filesystem::path{}, "recitation_" + seed_tag};
    result.recitation = run_phase(result.params, PhaseConfig::recitation_pretraining(cfg), seed,
                                  test_set, table, geometry, sink ? &recitation_sinks : nullptr);
    if (sink) result.recitation_checkpoint = dir / ("recitation_" + seed_tag + ".ckpt");
    return result;
}

SeedStudyResult run_study_seed(const RunConfig& cfg, int study_id, std::uint64_t seed,
                               NetworkParams params, const std::filesystem::path& out_root) {
    SeedStudyResult result;
    result.seed = seed;
    try {
        const GridGeometry geometry = cfg.geometry();
        const PostureTable table = PostureTable::make(cfg.posture_synthesis());
        Rng test_rng(derive_seed(seed, stream::kTest));
        const std::vector<Trial> test_set = make_test_set(test_rng, cfg.test_batches,
                                                          cfg.hold_policy());

        std::filesystem::path dir;
        const bool sink = !out_root.empty();
        if (sink) {
            dir = out_root / ("study" + std::to_string(study_id));
            std::filesystem::create_directories(dir);
        }
        const std::string seed_tag = "seed" + std::to_string(seed);
        PhaseSinks sinks{sink ? dir / ("metrics_" + seed_tag + ".csv") : "",
                         sink ? dir : std::filesystem::path{}, "final_" + seed_tag};
        result.record = run_phase(params, PhaseConfig::study(study_id, cfg), seed, test_set,
                                  table, geometry, sink ? &sinks : nullptr);
        if (sink) result.final_checkpoint = dir / ("final_" + seed_tag + ".ckpt");
        result.ok = true;
    } catch (const std::exception& e) {
        result.ok = false;
        result.error = e.what();
    }
    return result;
}

void for_each_seed_parallel(std::size_t count, int jobs,
                            const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::size_t next = 0;
    const std::size_t width = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    while (next < count) {
        std::vector<std::thread> pool;
        const std::size_t hi = std::min(count, next + width);
        for (std::size_t i = next; i < hi; ++i) pool.emplace_back(fn, i);
        for (auto& th : pool) th.join();
        next = hi;
    }
}

std::vector<SeedStudyResult> run_study(const RunConfig& cfg, int study_id,
                                       const std::filesystem::path& out_root) {
    std::vector<SeedStudyResult> results(cfg.seeds.size());
    for_each_seed_parallel(cfg.seeds.size(), cfg.jobs, [&](std::size_t i) {
        const std::uint64_t seed = cfg.seeds[i];
        try {
            NetworkParams params = [&] {
                if (cfg.force_fresh) {
                    Rng init_rng(derive_seed(seed, stream::kInit));
                    return init_params(NetworkShape::for_geometry(cfg.geometry()), init_rng);
                }
                return run_pretraining(cfg, seed, out_root).params;
            }();
            results[i] = run_study_seed(cfg, study_id, seed, std::move(params), out_root);
        } catch (const std::exception& e) {
            results[i].seed = seed;
            results[i].ok = false;
            results[i].error = e.what();
        }
    });
    write_study_reports(cfg, study_id, results, out_root / ("study" + std::to_string(study_id)));
    return results;
}

} // namespace countsim
