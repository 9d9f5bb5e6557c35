#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "countsim/geometry.hpp"
#include "countsim/image.hpp"
#include "countsim/posture.hpp"
#include "countsim/rng.hpp"

namespace countsim {

inline constexpr int kTrialSteps = 15;
inline constexpr int kNumberClasses = 11;

// Always-on contract check (asserts are compiled out of release builds).
void fatal_unless(bool condition, const char* what);

// Layer sizes of the fixed architecture: 3x3 convolution with 7 filters,
// 2x2/2 max pooling, dense hidden layer (130), Elman hidden layer (135) fed by
// [hidden3, trigger, context], and two heads (11-way softmax, 7 logistic
// joints). Only the image dimensions vary.
struct NetworkShape {
    int image_height = 40;
    int image_width = 134;
    int conv_filters = 7;
    int kernel_size = 3;
    int hidden3_size = 130;
    int hidden4_size = 135;
    int number_classes = kNumberClasses;
    int gesture_joints = kJointCount;
    int trigger_size = 2;

    static NetworkShape for_geometry(const GridGeometry& g);

    int conv_height() const { return image_height - kernel_size + 1; }
    int conv_width() const { return image_width - kernel_size + 1; }
    int pool_height() const { return conv_height() / 2; }
    int pool_width() const { return conv_width() / 2; }
    int pool_flat_size() const { return pool_height() * pool_width() * conv_filters; }
    int concat_size() const { return hidden3_size + trigger_size + hidden4_size; }

    bool operator==(const NetworkShape&) const = default;
};

// All trainable weights. Row-major: dense weight block W has out_size rows of
// in_size, conv kernels are [filter][ky][kx].
struct NetworkParams {
    NetworkShape shape;
    std::vector<double> conv_weights;    // filters * kernel^2
    std::vector<double> conv_bias;       // filters
    std::vector<double> dense3_weights;  // hidden3 * pool_flat
    std::vector<double> dense3_bias;     // hidden3
    std::vector<double> dense4_weights;  // hidden4 * concat
    std::vector<double> dense4_bias;     // hidden4
    std::vector<double> number_weights;  // classes * hidden4
    std::vector<double> number_bias;     // classes
    std::vector<double> gesture_weights; // joints * hidden4
    std::vector<double> gesture_bias;    // joints

    static NetworkParams zeros(const NetworkShape& shape);
    bool all_finite() const;
    bool operator==(const NetworkParams&) const = default;
};

// Weights uniform in [-0.1, 0.1] (draw order: conv, dense3, dense4, number
// head, gesture head), biases zero.
NetworkParams init_params(const NetworkShape& shape, Rng& rng);

struct RecurrentState {
    std::vector<double> context; // previous hidden-4 activation

    // Sequence-start value: the logistic resting activation, 0.5 per unit.
    static RecurrentState initial(const NetworkShape& shape);
};

struct StepInput {
    const Image* image = nullptr;
    double gesture_trigger = 0.0;
    double number_trigger = 0.0;
};

struct StepOutput {
    std::vector<double> number; // normalized distribution over classes 0..10
    Posture gesture;

    int argmax_class() const;
};

// Activations of the image-dependent front of the network (conv, pool,
// hidden3). Steps of a sequence that share a bit-identical input image share
// one stage, both forward and in the backward accumulation.
struct ImageStage {
    Image image;
    std::vector<double> conv_act;    // sigmoid conv activations
    std::vector<int> pool_argmax;    // per pooled cell: flat index into its conv plane
    std::vector<double> pooled;      // max-pooled values == dense3 input
    std::vector<double> hidden3;
};

struct StepTrace {
    int stage = 0;
    std::vector<double> concat;  // [hidden3, triggers, context] fed to dense4
    std::vector<double> hidden4;
    std::vector<double> number;  // raw logistic class activations
    std::vector<double> gesture; // logistic output
};

struct TrajectoryCache {
    NetworkShape shape;
    std::vector<ImageStage> stages;
    std::vector<StepTrace> steps;
};

struct StepResult {
    StepOutput output;
    RecurrentState state;
};

// One forward pass through the whole stack; returns the new context.
StepResult forward_step(const NetworkParams& params, const StepInput& input,
                        const RecurrentState& state);

// Supplies the visual input per step. `previous` is the network output of the
// preceding step (null at step 0); the gesture feedback loop lives in the
// provider, which converts that output into a hand in the image.
class StepInputProvider {
public:
    virtual ~StepInputProvider() = default;
    virtual StepInput step_input(int t, const StepOutput* previous) = 0;
};

struct SequenceResult {
    std::vector<StepOutput> outputs;
    TrajectoryCache cache; // steps empty unless keep_cache
};

SequenceResult sequence_forward(const NetworkParams& params, StepInputProvider& provider,
                                int steps = kTrialSteps, bool keep_cache = false);

struct StepTargets {
    int number_class = 0;
    Posture posture;
};

// Per-head learning rates, realized as loss-term scales:
// loss = sum_t [ number_lr * cross_entropy_t + gesture_lr * 0.5*|g_t - target|^2 ].
struct HeadRates {
    double number_lr = 0.0;
    double gesture_lr = 0.0;
};

// Parameter blocks included in an update. Excluded blocks stay bit-identical.
struct TrainedMask {
    bool conv = true;
    bool dense3 = true;
    bool dense4 = true;
    bool number_head = true;
    bool gesture_head = true;

    static TrainedMask all() { return {}; }
    // Gesture pre-training trains everything except the number head.
    static TrainedMask gesture_pretraining() { return {true, true, true, false, true}; }
};

struct Gradients {
    NetworkShape shape;
    std::vector<double> conv_weights, conv_bias;
    std::vector<double> dense3_weights, dense3_bias;
    std::vector<double> dense4_weights, dense4_bias;
    std::vector<double> number_weights, number_bias;
    std::vector<double> gesture_weights, gesture_bias;

    static Gradients zeros(const NetworkShape& shape);
    bool all_finite() const;
};

double sequence_loss(const TrajectoryCache& cache, std::span<const StepTargets> targets,
                     HeadRates rates);

// Backpropagation through time over the cached trajectory; gradients of the
// scaled loss are added into `grads`. Gradient flows through the context
// copies across all steps; input images are treated as constants.
void accumulate_sequence_gradients(const NetworkParams& params, const TrajectoryCache& cache,
                                   std::span<const StepTargets> targets, HeadRates rates,
                                   Gradients& grads);

// Plain gradient-descent step (rates are already inside the scaled loss).
void apply_gradients(NetworkParams& params, const Gradients& grads, const TrainedMask& mask);

// Convenience: accumulate + apply for a single trajectory.
void sequence_backward(NetworkParams& params, const TrajectoryCache& cache,
                       std::span<const StepTargets> targets, HeadRates rates,
                       const TrainedMask& mask);

// Exposed kernels (unit-tested directly).
namespace ops {
double sigmoid(double x);
double hidden_act(double x);
double hidden_act_deriv(double y);
void conv_forward(const NetworkShape& shape, const NetworkParams& params, const Image& image,
                  std::vector<double>& conv_act);
void pool_forward(const NetworkShape& shape, const std::vector<double>& conv_act,
                  std::vector<double>& pooled, std::vector<int>& argmax);
void pool_backward(const NetworkShape& shape, const std::vector<double>& dpooled,
                   const std::vector<int>& argmax, std::vector<double>& dconv);
void dense_forward(std::span<const double> weights, std::span<const double> bias,
                   std::span<const double> in, std::span<double> out_preact);
void softmax_inplace(std::span<double> v);
} // namespace ops

} // namespace countsim
