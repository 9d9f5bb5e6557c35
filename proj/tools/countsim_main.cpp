// countsim: reproduces the staged counting-and-pointing training pipeline.
// Subcommands: pretrain, study, analyze, render, stats.
// Exit codes: 0 success, 1 usage/config error, 2 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "countsim/analysis.hpp"
#include "countsim/checkpoint.hpp"
#include "countsim/config.hpp"
#include "countsim/phases.hpp"
#include "countsim/reports.hpp"

namespace fs = std::filesystem;
using namespace countsim;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string seeds_csv;
    int jobs = 0; // 0 = keep config value
    std::string out;
    int study = 0;
    std::string schedule_end;
    bool force_fresh = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_study) {
    cmd->add_option("--config", opts.config_path, "Run configuration file (key = value)");
    cmd->add_option("--seeds", opts.seeds_csv, "Comma-separated seed list, e.g. 1,2,3");
    cmd->add_option("--jobs", opts.jobs, "Seed-level parallelism");
    cmd->add_option("--out", opts.out, "Output directory");
    if (with_study) cmd->add_option("--study", opts.study, "Study id (1, 2 or 3)");
    cmd->add_option("--schedule-end", opts.schedule_end,
                    "Study-3 schedule endpoint: paper or alt");
}

RunConfig build_config(const CommonOpts& opts) {
    RunConfig cfg;
    if (!opts.config_path.empty()) cfg = RunConfig::from_file(opts.config_path);
    if (!opts.seeds_csv.empty()) cfg.apply("seeds", opts.seeds_csv);
    if (opts.jobs > 0) cfg.jobs = opts.jobs;
    if (opts.study > 0) cfg.study = opts.study;
    if (!opts.schedule_end.empty()) cfg.apply("schedule_end", opts.schedule_end);
    if (opts.force_fresh) cfg.force_fresh = true;
    if (!opts.out.empty()) cfg.out_dir = opts.out;
    if (cfg.out_dir.empty()) {
        if (const char* root = std::getenv("COUNTSIM_OUT_ROOT"))
            cfg.out_dir = (fs::path(root) / "run").string();
        else
            cfg.out_dir = "runs";
    }
    cfg.validate();
    return cfg;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
    const fs::path out(cfg.out_dir);
    fs::create_directories(out);
    std::ofstream copy(out / "config_used.cfg", std::ios::binary);
    if (!copy) throw ConfigError("cannot write config copy into " + out.string());
    copy << cfg.serialize();
    return out;
}

// "balls=2:1,7:3 hand=2 trigger=1"; empty spec means an empty scene.
Scene parse_scene_spec(const std::string& spec) {
    std::vector<Ball> balls;
    bool trigger = false;
    std::optional<int> hand;
    std::istringstream in(spec);
    std::string token;
    int pos = 0;
    auto fail = [&pos, &token](const std::string& what) {
        throw std::invalid_argument("scene spec, token " + std::to_string(pos) + " ('" + token +
                                    "'): " + what);
    };
    while (in >> token) {
        ++pos;
        const auto eq = token.find('=');
        if (eq == std::string::npos) fail("expected key=value");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        try {
            if (key == "balls") {
                if (value.empty() || value == "-") continue;
                std::istringstream bs(value);
                std::string item;
                while (std::getline(bs, item, ',')) {
                    const auto colon = item.find(':');
                    if (colon == std::string::npos) fail("ball must be column:row");
                    balls.push_back(Ball{std::stoi(item.substr(0, colon)),
                                         std::stoi(item.substr(colon + 1))});
                }
            } else if (key == "trigger") {
                if (value != "0" && value != "1") fail("trigger must be 0 or 1");
                trigger = value == "1";
            } else if (key == "hand") {
                hand = std::stoi(value);
            } else {
                fail("unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            fail("bad number");
        }
    }
    try {
        return Scene::make(std::move(balls), trigger, hand);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("scene spec: ") + e.what());
    }
}

int cmd_pretrain(const RunConfig& cfg) {
    const fs::path out = prepare_out_dir(cfg);
    for_each_seed_parallel(cfg.seeds.size(), cfg.jobs, [&](std::size_t i) {
        run_pretraining(cfg, cfg.seeds[i], out);
    });
    std::cout << "pretraining complete for " << cfg.seeds.size() << " seed(s) under "
              << (out / "pretrain").string() << "\n";
    return 0;
}

int cmd_study(const RunConfig& cfg) {
    const fs::path out = prepare_out_dir(cfg);
    const NetworkShape shape = NetworkShape::for_geometry(cfg.geometry());

    // Phase ordering: main training starts from the recitation checkpoint
    // unless force_fresh explicitly overrides it.
    std::vector<NetworkParams> start(cfg.seeds.size());
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        const std::uint64_t seed = cfg.seeds[i];
        if (cfg.force_fresh) {
            Rng init_rng(derive_seed(seed, stream::kInit));
            start[i] = init_params(shape, init_rng);
            continue;
        }
        const fs::path ckpt = out / "pretrain" / ("recitation_seed" + std::to_string(seed) +
                                                  ".ckpt");
        if (!fs::exists(ckpt))
            throw ConfigError("missing pre-training checkpoint " + ckpt.string() +
                              "; run `countsim pretrain` first or pass --force-fresh");
        start[i] = load_checkpoint(ckpt);
        if (!(start[i].shape == shape))
            throw ConfigError("checkpoint " + ckpt.string() +
                              " was trained at a different geometry");
    }

    std::vector<SeedStudyResult> results(cfg.seeds.size());
    for_each_seed_parallel(cfg.seeds.size(), cfg.jobs, [&](std::size_t i) {
        results[i] = run_study_seed(cfg, cfg.study, cfg.seeds[i], std::move(start[i]), out);
    });

    const fs::path study_dir = out / ("study" + std::to_string(cfg.study));
    int failed = 0;
    for (const SeedStudyResult& r : results)
        if (!r.ok) {
            ++failed;
            std::cerr << "seed " << r.seed << " failed: " << r.error << "\n";
        }
    if (failed > 0) {
        fs::create_directories(study_dir);
        std::ofstream log(study_dir / "failures.txt", std::ios::binary);
        for (const SeedStudyResult& r : results)
            if (!r.ok) log << "seed " << r.seed << ": " << r.error << "\n";
    }
    try {
        write_study_reports(cfg, cfg.study, results, study_dir);
    } catch (const std::exception& e) {
        std::cerr << "aggregate not emitted: " << e.what() << "\n";
        return 2;
    }
    std::cout << "study " << cfg.study << " reports written to " << study_dir.string() << "\n";
    return 0;
}

int cmd_analyze(const RunConfig& cfg, const std::string& rows) {
    const fs::path out = prepare_out_dir(cfg);
    const fs::path study_dir = out / "study3";
    const NetworkShape shape = NetworkShape::for_geometry(cfg.geometry());

    std::vector<NetworkParams> params;
    for (std::uint64_t seed : cfg.seeds) {
        const fs::path ckpt = study_dir / ("final_seed" + std::to_string(seed) + ".ckpt");
        if (!fs::exists(ckpt))
            throw ConfigError("missing study-3 checkpoint " + ckpt.string() +
                              "; run `countsim study --study 3` first");
        params.push_back(load_checkpoint(ckpt));
        if (!(params.back().shape == shape))
            throw ConfigError("checkpoint " + ckpt.string() +
                              " was trained at a different geometry");
    }

    const fs::path analysis_dir = out / "analysis";
    fs::create_directories(analysis_dir);

    if (rows == "both") {
        const DistanceReport report = distance_analysis(cfg, params, cfg.seeds);
        write_distance_reports(report, analysis_dir);

        // Set-size analysis re-scores each seed's test set from its checkpoint.
        const GridGeometry geometry = cfg.geometry();
        const PostureTable table = PostureTable::make(cfg.posture_synthesis());
        std::vector<SeedStudyResult> results(cfg.seeds.size());
        for_each_seed_parallel(cfg.seeds.size(), cfg.jobs, [&](std::size_t i) {
            Rng test_rng(derive_seed(cfg.seeds[i], stream::kTest));
            const auto test_set = make_test_set(test_rng, cfg.test_batches, cfg.hold_policy());
            results[i].seed = cfg.seeds[i];
            results[i].record.seed = cfg.seeds[i];
            results[i].record.evals.push_back(
                evaluate(params[i], test_set, table, geometry, 0));
            results[i].ok = true;
        });
        write_set_size_reports(set_size_analysis(results), analysis_dir);
    } else {
        // Single-band evaluation only.
        const int lo = rows == "low" ? 0 : 3;
        const int hi = rows == "low" ? 1 : 4;
        const GridGeometry geometry = cfg.geometry();
        const PostureTable table = PostureTable::make(cfg.posture_synthesis());
        const std::vector<Skill> skills = {Skill::CountPoint, Skill::Puppet};
        std::ofstream csv(analysis_dir / ("distance_" + rows + ".csv"), std::ios::binary);
        csv << "skill,seed,band,accuracy\n";
        for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
            Rng rng(derive_seed(cfg.seeds[i], stream::kAnalysis, rows == "low" ? 1 : 2));
            const auto set = make_row_band_test_set(rng, cfg.test_batches, lo, hi, skills,
                                                    cfg.hold_policy());
            const EvalResult ev = evaluate(params[i], set, table, geometry, 0);
            for (Skill skill : skills) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g",
                              ev.by_skill.at(skill).number_accuracy());
                csv << skill_name(skill) << "," << cfg.seeds[i] << "," << rows << "," << buf
                    << "\n";
            }
        }
    }
    std::cout << "analysis reports written to " << analysis_dir.string() << "\n";
    return 0;
}

int cmd_render(const RunConfig& cfg, const std::string& spec, const std::string& out_file) {
    const Scene scene = parse_scene_spec(spec);
    const Image image = render(scene, cfg.geometry());
    write_pgm(image, out_file);
    std::cout << "wrote " << out_file << "\n";
    return 0;
}

int cmd_stats(const std::string& conditions_path, const std::string& out_file) {
    const ConditionTable table = read_conditions_csv(conditions_path);
    const std::string text = study_stats_text(table);
    if (out_file.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_file, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + out_file);
        out << text;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Developmental counting-and-pointing training simulator"};
    app.require_subcommand(1);

    CommonOpts pretrain_opts, study_opts, analyze_opts, render_opts;
    int gesture_iters = -1, recitation_iters = -1;

    CLI::App* pretrain = app.add_subcommand("pretrain", "Gesture then recitation pre-training");
    add_common(pretrain, pretrain_opts, false);
    pretrain->add_option("--iterations-gesture", gesture_iters,
                         "Override gesture pre-training iterations");
    pretrain->add_option("--iterations-recitation", recitation_iters,
                         "Override recitation pre-training iterations");

    CLI::App* study = app.add_subcommand("study", "Main training study over all seeds");
    int study_positional = 0;
    study->add_option("id", study_positional, "Study id (1, 2 or 3)");
    add_common(study, study_opts, true);
    study->add_flag("--force-fresh", study_opts.force_fresh,
                    "Start from raw initialization instead of pre-training checkpoints");

    CLI::App* analyze = app.add_subcommand("analyze", "Distance and set-size analyses (study 3)");
    add_common(analyze, analyze_opts, false);
    std::string rows = "both";
    analyze->add_option("--rows", rows, "Row band: both, low or high")
        ->check(CLI::IsMember({"both", "low", "high"}));

    CLI::App* render_cmd = app.add_subcommand("render", "Render a scene spec to a PGM file");
    std::string scene_spec, render_out = "scene.pgm";
    render_cmd->add_option("spec", scene_spec,
                           "Scene spec, e.g. \"balls=2:1,7:3 hand=2 trigger=1\"");
    render_cmd->add_option("--out", render_out, "Output PGM path");
    render_cmd->add_option("--config", render_opts.config_path, "Run configuration file");

    CLI::App* stats_cmd = app.add_subcommand("stats", "Recompute statistics from conditions.csv");
    std::string conditions_path, stats_out;
    stats_cmd->add_option("--conditions", conditions_path, "Path to conditions.csv")->required();
    stats_cmd->add_option("--out", stats_out, "Write the stats text here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (pretrain->parsed()) {
            RunConfig cfg = build_config(pretrain_opts);
            if (gesture_iters >= 0) cfg.gesture_pre_iterations = gesture_iters;
            if (recitation_iters >= 0) cfg.recitation_pre_iterations = recitation_iters;
            cfg.validate();
            return cmd_pretrain(cfg);
        }
        if (study->parsed()) {
            if (study_positional > 0) study_opts.study = study_positional;
            return cmd_study(build_config(study_opts));
        }
        if (analyze->parsed()) return cmd_analyze(build_config(analyze_opts), rows);
        if (render_cmd->parsed()) {
            RunConfig cfg;
            if (!render_opts.config_path.empty())
                cfg = RunConfig::from_file(render_opts.config_path);
            cfg.geometry().validate();
            return cmd_render(cfg, scene_spec, render_out);
        }
        if (stats_cmd->parsed()) return cmd_stats(conditions_path, stats_out);
    } catch (const TrainingDivergence& e) {
        std::cerr << "error: " << e.what() << " (partial artifacts kept)\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
