#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "countsim/checkpoint.hpp"
#include "countsim/config.hpp"
#include "countsim/curriculum.hpp"
#include "countsim/scoring.hpp"

namespace countsim {

enum class Phase { GesturePre, RecitationPre, Study1, Study2, Study3 };

std::string_view phase_name(Phase phase);

// A phase of the staged curriculum: which skills (or schedule) feed the
// batches, the per-head rates, the trained parameter blocks, and cadences.
struct PhaseConfig {
    Phase phase = Phase::GesturePre;
    int iterations = 0;
    std::vector<Skill> skills;
    std::optional<SkillSchedule> schedule; // Study 3 only
    HeadRates rates;
    TrainedMask mask;
    int eval_every = 50;
    int checkpoint_every = 500;
    HoldPolicy hold = HoldPolicy::HoldLast;
    bool average_batch = true;     // divide summed gradients by the batch size
    std::string optimizer = "adam"; // adam | momentum | sgd
    double momentum = 0.9;          // used by the momentum optimizer

    static PhaseConfig gesture_pretraining(const RunConfig& cfg);
    static PhaseConfig recitation_pretraining(const RunConfig& cfg);
    static PhaseConfig study(int study_id, const RunConfig& cfg);
};

struct TrainingDivergence : std::runtime_error {
    Phase phase;
    int iteration;
    TrainingDivergence(Phase ph, int it)
        : std::runtime_error(std::string("training diverged (non-finite gradient) in ") +
                             std::string(phase_name(ph)) + " at iteration " +
                             std::to_string(it)),
          phase(ph), iteration(it) {}
};

struct RunRecord {
    std::uint64_t seed = 0;
    Phase phase = Phase::GesturePre;
    std::vector<EvalResult> evals; // one per evaluation point

    const EvalResult& final_eval() const;
};

// Output locations of one phase; empty paths disable the corresponding sink.
struct PhaseSinks {
    std::filesystem::path metrics_csv;
    std::filesystem::path checkpoint_dir;
    std::string checkpoint_prefix;
};

// Trains one phase: one batch per iteration, gradients summed over the batch
// and applied once, evaluation on the provided test set every eval_every
// iterations (plus the final iteration). Evaluation never touches params.
RunRecord run_phase(NetworkParams& params, const PhaseConfig& config, std::uint64_t seed,
                    std::span<const Trial> test_set, const PostureTable& table,
                    const GridGeometry& geometry, const PhaseSinks* sinks = nullptr);

void write_metrics_csv(const RunRecord& record, const std::filesystem::path& path);

// Both pre-training sessions in the paper's order (pointing, then recitation).
struct PretrainResult {
    NetworkParams params;
    RunRecord gesture;
    RunRecord recitation;
    std::filesystem::path gesture_checkpoint;
    std::filesystem::path recitation_checkpoint;
};

// out_root may be empty (no files written). Writes checkpoints and metrics
// under out_root/pretrain otherwise.
PretrainResult run_pretraining(const RunConfig& cfg, std::uint64_t seed,
                               const std::filesystem::path& out_root);

struct SeedStudyResult {
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    RunRecord record;
    std::filesystem::path final_checkpoint;
};

// Main training of one seed, starting from (usually pre-trained) params.
SeedStudyResult run_study_seed(const RunConfig& cfg, int study_id, std::uint64_t seed,
                               NetworkParams params, const std::filesystem::path& out_root);

// Runs fn(i) for every seed index, at most `jobs` at a time. Each seed's work
// is independent, so outputs do not depend on the job count.
void for_each_seed_parallel(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

// Full study pipeline for all configured seeds: pre-training (unless
// cfg.force_fresh), the study phase, and the aggregated reports.
std::vector<SeedStudyResult> run_study(const RunConfig& cfg, int study_id,
                                       const std::filesystem::path& out_root);

} // namespace countsim
