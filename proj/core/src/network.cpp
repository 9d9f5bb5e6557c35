#include "countsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace countsim {

void fatal_unless(bool condition, const char* what) {
    if (!condition) {
        std::fprintf(stderr, "fatal contract violation: %s\n", what);
        std::abort();
    }
}

NetworkShape NetworkShape::for_geometry(const GridGeometry& g) {
    NetworkShape s;
    s.image_height = g.image_height;
    s.image_width = g.image_width;
    return s;
}

namespace {

bool finite_all(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

template <typename Blocks>
void size_blocks(Blocks& b, const NetworkShape& s) {
    const int kk = s.kernel_size * s.kernel_size;
    b.conv_weights.assign(static_cast<std::size_t>(s.conv_filters) * kk, 0.0);
    b.conv_bias.assign(static_cast<std::size_t>(s.conv_filters), 0.0);
    b.dense3_weights.assign(static_cast<std::size_t>(s.hidden3_size) * s.pool_flat_size(), 0.0);
    b.dense3_bias.assign(static_cast<std::size_t>(s.hidden3_size), 0.0);
    b.dense4_weights.assign(static_cast<std::size_t>(s.hidden4_size) * s.concat_size(), 0.0);
    b.dense4_bias.assign(static_cast<std::size_t>(s.hidden4_size), 0.0);
    b.number_weights.assign(static_cast<std::size_t>(s.number_classes) * s.hidden4_size, 0.0);
    b.number_bias.assign(static_cast<std::size_t>(s.number_classes), 0.0);
    b.gesture_weights.assign(static_cast<std::size_t>(s.gesture_joints) * s.hidden4_size, 0.0);
    b.gesture_bias.assign(static_cast<std::size_t>(s.gesture_joints), 0.0);
}

template <typename Blocks>
bool blocks_finite(const Blocks& b) {
    return finite_all(b.conv_weights) && finite_all(b.conv_bias) && finite_all(b.dense3_weights) &&
           finite_all(b.dense3_bias) && finite_all(b.dense4_weights) && finite_all(b.dense4_bias) &&
           finite_all(b.number_weights) && finite_all(b.number_bias) &&
           finite_all(b.gesture_weights) && finite_all(b.gesture_bias);
}

} // namespace

NetworkParams NetworkParams::zeros(const NetworkShape& shape) {
    NetworkParams p;
    p.shape = shape;
    size_blocks(p, shape);
    return p;
}

bool NetworkParams::all_finite() const { return blocks_finite(*this); }

Gradients Gradients::zeros(const NetworkShape& shape) {
    Gradients g;
    g.shape = shape;
    size_blocks(g, shape);
    return g;
}

bool Gradients::all_finite() const { return blocks_finite(*this); }

NetworkParams init_params(const NetworkShape& shape, Rng& rng) {
    NetworkParams p = NetworkParams::zeros(shape);
    // Fan-scaled uniform init (Glorot), biases zero.
    auto draw = [&rng](std::vector<double>& w, int fan_in, int fan_out) {
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        for (double& x : w) x = rng.uniform(-limit, limit);
    };
    const int kk = shape.kernel_size * shape.kernel_size;
    draw(p.conv_weights, kk, kk);
    draw(p.dense3_weights, shape.pool_flat_size(), shape.hidden3_size);
    draw(p.dense4_weights, shape.concat_size(), shape.hidden4_size);
    draw(p.gesture_weights, shape.hidden4_size, shape.gesture_joints);
    // The number head starts at zero: it is masked during gesture
    // pre-training, and a random head would inject noise into the shared
    // layers the moment its loss switches on.
    for (double& x : p.number_weights) x = 0.0;
    // The trigger columns of dense4 start at zero: a trigger unit first seen
    // mid-curriculum would otherwise inject its random column into every
    // activation the moment it switches on.
    const int u_size = shape.concat_size();
    for (int i = 0; i < shape.hidden4_size; ++i)
        for (int k = shape.hidden3_size; k < shape.hidden3_size + shape.trigger_size; ++k)
            p.dense4_weights[static_cast<std::size_t>(i) * u_size + k] = 0.0;
    return p;
}

RecurrentState RecurrentState::initial(const NetworkShape& shape) {
    RecurrentState s;
    s.context.assign(static_cast<std::size_t>(shape.hidden4_size), 0.0);
    return s;
}

int StepOutput::argmax_class() const {
    return static_cast<int>(std::max_element(number.begin(), number.end()) - number.begin());
}

namespace ops {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double hidden_act(double x) { return std::tanh(x); }

// derivative computed from the activation value
double hidden_act_deriv(double y) { return 1.0 - y * y; }

void conv_forward(const NetworkShape& shape, const NetworkParams& params, const Image& image,
                  std::vector<double>& conv_act) {
    const int ch = shape.conv_height(), cw = shape.conv_width();
    const int k = shape.kernel_size, w = shape.image_width;
    conv_act.resize(static_cast<std::size_t>(shape.conv_filters) * ch * cw);
    for (int f = 0; f < shape.conv_filters; ++f) {
        double* plane = &conv_act[static_cast<std::size_t>(f) * ch * cw];
        const double bias = params.conv_bias[static_cast<std::size_t>(f)];
        std::fill(plane, plane + static_cast<std::size_t>(ch) * cw, bias);
        const double* kernel = &params.conv_weights[static_cast<std::size_t>(f) * k * k];
        for (int ky = 0; ky < k; ++ky)
            for (int kx = 0; kx < k; ++kx) {
                const double kv = kernel[ky * k + kx];
                for (int y = 0; y < ch; ++y) {
                    const double* src = &image.pixels[static_cast<std::size_t>(y + ky) * w + kx];
                    double* dst = plane + static_cast<std::size_t>(y) * cw;
                    for (int x = 0; x < cw; ++x) dst[x] += kv * src[x];
                }
            }
        for (int i = 0; i < ch * cw; ++i) plane[i] = hidden_act(plane[i]);
    }
}

void pool_forward(const NetworkShape& shape, const std::vector<double>& conv_act,
                  std::vector<double>& pooled, std::vector<int>& argmax) {
    const int ch = shape.conv_height(), cw = shape.conv_width();
    const int ph = shape.pool_height(), pw = shape.pool_width();
    pooled.resize(static_cast<std::size_t>(shape.pool_flat_size()));
    argmax.resize(pooled.size());
    std::size_t p = 0;
    for (int f = 0; f < shape.conv_filters; ++f) {
        const int plane_off = f * ch * cw;
        for (int py = 0; py < ph; ++py)
            for (int px = 0; px < pw; ++px, ++p) {
                int best = plane_off + (2 * py) * cw + 2 * px;
                double best_v = conv_act[static_cast<std::size_t>(best)];
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        const int idx = plane_off + (2 * py + dy) * cw + (2 * px + dx);
                        const double v = conv_act[static_cast<std::size_t>(idx)];
                        if (v > best_v) {
                            best_v = v;
                            best = idx;
                        }
                    }
                pooled[p] = best_v;
                argmax[p] = best;
            }
    }
}

void pool_backward(const NetworkShape& shape, const std::vector<double>& dpooled,
                   const std::vector<int>& argmax, std::vector<double>& dconv) {
    fatal_unless(dpooled.size() == argmax.size(), "pool_backward: size mismatch");
    dconv.assign(static_cast<std::size_t>(shape.conv_filters) * shape.conv_height() *
                     shape.conv_width(),
                 0.0);
    for (std::size_t p = 0; p < dpooled.size(); ++p)
        dconv[static_cast<std::size_t>(argmax[p])] += dpooled[p];
}

void dense_forward(std::span<const double> weights, std::span<const double> bias,
                   std::span<const double> in, std::span<double> out_preact) {
    const std::size_t n_out = out_preact.size(), n_in = in.size();
    fatal_unless(weights.size() == n_out * n_in && bias.size() == n_out,
                 "dense_forward: shape mismatch");
    for (std::size_t i = 0; i < n_out; ++i) {
        const double* row = &weights[i * n_in];
        double acc = bias[i];
        for (std::size_t k = 0; k < n_in; ++k) acc += row[k] * in[k];
        out_preact[i] = acc;
    }
}

void softmax_inplace(std::span<double> v) {
    double mx = v[0];
    for (double x : v) mx = std::max(mx, x);
    double sum = 0.0;
    for (double& x : v) {
        x = std::exp(x - mx);
        sum += x;
    }
    for (double& x : v) x /= sum;
}

} // namespace ops

namespace {

void compute_stage(const NetworkParams& params, const Image& image, ImageStage& stage) {
    const NetworkShape& s = params.shape;
    fatal_unless(image.height == s.image_height && image.width == s.image_width,
                 "forward: image size does not match network shape");
    stage.image = image;
    ops::conv_forward(s, params, image, stage.conv_act);
    ops::pool_forward(s, stage.conv_act, stage.pooled, stage.pool_argmax);
    stage.hidden3.resize(static_cast<std::size_t>(s.hidden3_size));
    ops::dense_forward(params.dense3_weights, params.dense3_bias, stage.pooled, stage.hidden3);
    for (double& x : stage.hidden3) x = ops::hidden_act(x);
}

// Recurrent tail of one step: dense4 over [hidden3, triggers, context], then
// the two heads.
void compute_step_tail(const NetworkParams& params, const ImageStage& stage, const StepInput& in,
                       const std::vector<double>& context, StepTrace& trace) {
    const NetworkShape& s = params.shape;
    fatal_unless(static_cast<int>(context.size()) == s.hidden4_size,
                 "forward: context size mismatch");
    trace.concat.resize(static_cast<std::size_t>(s.concat_size()));
    std::copy(stage.hidden3.begin(), stage.hidden3.end(), trace.concat.begin());
    trace.concat[static_cast<std::size_t>(s.hidden3_size)] = in.gesture_trigger;
    trace.concat[static_cast<std::size_t>(s.hidden3_size) + 1] = in.number_trigger;
    std::copy(context.begin(), context.end(),
              trace.concat.begin() + s.hidden3_size + s.trigger_size);

    trace.hidden4.resize(static_cast<std::size_t>(s.hidden4_size));
    ops::dense_forward(params.dense4_weights, params.dense4_bias, trace.concat, trace.hidden4);
    for (double& x : trace.hidden4) x = ops::hidden_act(x);

    trace.number.resize(static_cast<std::size_t>(s.number_classes));
    ops::dense_forward(params.number_weights, params.number_bias, trace.hidden4, trace.number);
    for (double& x : trace.number) x = ops::sigmoid(x);

    trace.gesture.resize(static_cast<std::size_t>(s.gesture_joints));
    ops::dense_forward(params.gesture_weights, params.gesture_bias, trace.hidden4, trace.gesture);
    for (double& x : trace.gesture) x = ops::sigmoid(x);
}

StepOutput output_from_trace(const StepTrace& trace) {
    StepOutput out;
    out.number = trace.number;
    double sum = 0.0;
    for (double v : out.number) sum += v;
    for (double& v : out.number) v /= sum;
    for (int j = 0; j < kJointCount; ++j)
        out.gesture.joints[static_cast<std::size_t>(j)] = trace.gesture[static_cast<std::size_t>(j)];
    return out;
}

} // namespace

StepResult forward_step(const NetworkParams& params, const StepInput& input,
                        const RecurrentState& state) {
    fatal_unless(input.image != nullptr, "forward_step: null image");
    ImageStage stage;
    compute_stage(params, *input.image, stage);
    StepTrace trace;
    compute_step_tail(params, stage, input, state.context, trace);
    StepResult r;
    r.output = output_from_trace(trace);
    r.state.context = trace.hidden4;
    return r;
}

SequenceResult sequence_forward(const NetworkParams& params, StepInputProvider& provider,
                                int steps, bool keep_cache) {
    SequenceResult res;
    res.cache.shape = params.shape;
    RecurrentState state = RecurrentState::initial(params.shape);
    const StepOutput* prev = nullptr;
    res.outputs.reserve(static_cast<std::size_t>(steps));
    for (int t = 0; t < steps; ++t) {
        const StepInput in = provider.step_input(t, prev);
        fatal_unless(in.image != nullptr, "sequence_forward: null image");
        auto& stages = res.cache.stages;
        if (stages.empty() || !(stages.back().image == *in.image)) {
            stages.emplace_back();
            compute_stage(params, *in.image, stages.back());
        }
        const int stage_idx = static_cast<int>(stages.size()) - 1;

        StepTrace trace;
        trace.stage = stage_idx;
        compute_step_tail(params, stages[static_cast<std::size_t>(stage_idx)], in, state.context,
                          trace);
        state.context = trace.hidden4;
        res.outputs.push_back(output_from_trace(trace));
        if (keep_cache) res.cache.steps.push_back(std::move(trace));
        prev = &res.outputs.back();
    }
    return res;
}

double sequence_loss(const TrajectoryCache& cache, std::span<const StepTargets> targets,
                     HeadRates rates) {
    fatal_unless(cache.steps.size() == targets.size(), "sequence_loss: size mismatch");
    double loss = 0.0;
    for (std::size_t t = 0; t < cache.steps.size(); ++t) {
        const StepTrace& st = cache.steps[t];
        for (int c = 0; c < static_cast<int>(st.number.size()); ++c) {
            const double d = st.number[static_cast<std::size_t>(c)] -
                             (c == targets[t].number_class ? 1.0 : 0.0);
            loss += rates.number_lr * 0.5 * d * d;
        }
        for (int j = 0; j < kJointCount; ++j) {
            const double d = st.gesture[static_cast<std::size_t>(j)] -
                             targets[t].posture.joints[static_cast<std::size_t>(j)];
            loss += rates.gesture_lr * 0.5 * d * d;
        }
    }
    return loss;
}

void accumulate_sequence_gradients(const NetworkParams& params, const TrajectoryCache& cache,
                                   std::span<const StepTargets> targets, HeadRates rates,
                                   Gradients& grads) {
    const NetworkShape& s = params.shape;
    fatal_unless(cache.shape == s && grads.shape == s,
                 "accumulate_sequence_gradients: shape mismatch");
    fatal_unless(cache.steps.size() == targets.size(),
                 "accumulate_sequence_gradients: target count mismatch");
    const int h3 = s.hidden3_size, h4 = s.hidden4_size;
    const int classes = s.number_classes, joints = s.gesture_joints;
    const int u_size = s.concat_size(), pool = s.pool_flat_size();
    const int ctx_off = h3 + s.trigger_size;
    const int ch = s.conv_height(), cw = s.conv_width(), k = s.kernel_size;

    std::vector<double> dctx(static_cast<std::size_t>(h4), 0.0);
    std::vector<double> dln(static_cast<std::size_t>(classes));
    std::vector<double> dgpre(static_cast<std::size_t>(joints));
    std::vector<double> dh4(static_cast<std::size_t>(h4));
    std::vector<double> du(static_cast<std::size_t>(u_size));
    std::vector<std::vector<double>> stage_dh3pre(cache.stages.size(),
                                                  std::vector<double>(static_cast<std::size_t>(h3),
                                                                      0.0));

    // Walk time backwards; context connections carry gradient between steps.
    for (int t = static_cast<int>(cache.steps.size()) - 1; t >= 0; --t) {
        const StepTrace& st = cache.steps[static_cast<std::size_t>(t)];
        const StepTargets& tg = targets[static_cast<std::size_t>(t)];

        // Logistic number units with squared error, one unit per class.
        for (int c = 0; c < classes; ++c) {
            const double y = st.number[static_cast<std::size_t>(c)];
            dln[static_cast<std::size_t>(c)] =
                rates.number_lr * (y - (c == tg.number_class ? 1.0 : 0.0)) * y * (1.0 - y);
        }
        // Logistic + squared-error head.
        for (int j = 0; j < joints; ++j) {
            const double g = st.gesture[static_cast<std::size_t>(j)];
            dgpre[static_cast<std::size_t>(j)] =
                rates.gesture_lr * (g - tg.posture.joints[static_cast<std::size_t>(j)]) * g *
                (1.0 - g);
        }

        for (int i = 0; i < h4; ++i) dh4[static_cast<std::size_t>(i)] = dctx[static_cast<std::size_t>(i)];
        for (int c = 0; c < classes; ++c) {
            const double d = dln[static_cast<std::size_t>(c)];
            grads.number_bias[static_cast<std::size_t>(c)] += d;
            const double* wr = &params.number_weights[static_cast<std::size_t>(c) * h4];
            double* gr = &grads.number_weights[static_cast<std::size_t>(c) * h4];
            for (int i = 0; i < h4; ++i) {
                gr[i] += d * st.hidden4[static_cast<std::size_t>(i)];
                dh4[static_cast<std::size_t>(i)] += d * wr[i];
            }
        }
        for (int j = 0; j < joints; ++j) {
            const double d = dgpre[static_cast<std::size_t>(j)];
            grads.gesture_bias[static_cast<std::size_t>(j)] += d;
            const double* wr = &params.gesture_weights[static_cast<std::size_t>(j) * h4];
            double* gr = &grads.gesture_weights[static_cast<std::size_t>(j) * h4];
            for (int i = 0; i < h4; ++i) {
                gr[i] += d * st.hidden4[static_cast<std::size_t>(i)];
                dh4[static_cast<std::size_t>(i)] += d * wr[i];
            }
        }

        std::fill(du.begin(), du.end(), 0.0);
        for (int i = 0; i < h4; ++i) {
            const double hv = st.hidden4[static_cast<std::size_t>(i)];
            const double d = dh4[static_cast<std::size_t>(i)] * ops::hidden_act_deriv(hv);
            grads.dense4_bias[static_cast<std::size_t>(i)] += d;
            const double* wr = &params.dense4_weights[static_cast<std::size_t>(i) * u_size];
            double* gr = &grads.dense4_weights[static_cast<std::size_t>(i) * u_size];
            const double* uv = st.concat.data();
            for (int kk = 0; kk < u_size; ++kk) {
                gr[kk] += d * uv[kk];
                du[static_cast<std::size_t>(kk)] += d * wr[kk];
            }
        }

        // hidden3 share, deferred to the per-stage pass below.
        auto& acc = stage_dh3pre[static_cast<std::size_t>(st.stage)];
        const auto& h3v = cache.stages[static_cast<std::size_t>(st.stage)].hidden3;
        for (int i = 0; i < h3; ++i)
            acc[static_cast<std::size_t>(i)] +=
                du[static_cast<std::size_t>(i)] *
                ops::hidden_act_deriv(h3v[static_cast<std::size_t>(i)]);
        for (int i = 0; i < h4; ++i)
            dctx[static_cast<std::size_t>(i)] = du[static_cast<std::size_t>(ctx_off + i)];
    }

    // Steps sharing a bit-identical image share the conv/pool/dense3
    // activations, so their dense3 pre-activation gradients can be summed
    // before the single heavy pass per stage.
    std::vector<double> dz(static_cast<std::size_t>(pool));
    for (std::size_t si = 0; si < cache.stages.size(); ++si) {
        const ImageStage& stg = cache.stages[si];
        const auto& acc = stage_dh3pre[si];
        std::fill(dz.begin(), dz.end(), 0.0);
        for (int i = 0; i < h3; ++i) {
            const double d = acc[static_cast<std::size_t>(i)];
            grads.dense3_bias[static_cast<std::size_t>(i)] += d;
            const double* wr = &params.dense3_weights[static_cast<std::size_t>(i) * pool];
            double* gr = &grads.dense3_weights[static_cast<std::size_t>(i) * pool];
            const double* z = stg.pooled.data();
            for (int kk = 0; kk < pool; ++kk) {
                gr[kk] += d * z[kk];
                dz[static_cast<std::size_t>(kk)] += d * wr[kk];
            }
        }
        // Gradient reaches only the argmax conv positions.
        for (int p = 0; p < pool; ++p) {
            const int flat = stg.pool_argmax[static_cast<std::size_t>(p)];
            const double a = stg.conv_act[static_cast<std::size_t>(flat)];
            const double dpre = dz[static_cast<std::size_t>(p)] * ops::hidden_act_deriv(a);
            const int f = flat / (ch * cw);
            const int rem = flat % (ch * cw);
            const int y = rem / cw, x = rem % cw;
            grads.conv_bias[static_cast<std::size_t>(f)] += dpre;
            double* gk = &grads.conv_weights[static_cast<std::size_t>(f) * k * k];
            for (int ky = 0; ky < k; ++ky) {
                const double* src =
                    &stg.image.pixels[static_cast<std::size_t>(y + ky) * s.image_width + x];
                for (int kx = 0; kx < k; ++kx) gk[ky * k + kx] += dpre * src[kx];
            }
        }
    }
}

void apply_gradients(NetworkParams& params, const Gradients& grads, const TrainedMask& mask) {
    fatal_unless(params.shape == grads.shape, "apply_gradients: shape mismatch");
    auto step = [](std::vector<double>& w, const std::vector<double>& g) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= g[i];
    };
    if (mask.conv) {
        step(params.conv_weights, grads.conv_weights);
        step(params.conv_bias, grads.conv_bias);
    }
    if (mask.dense3) {
        step(params.dense3_weights, grads.dense3_weights);
        step(params.dense3_bias, grads.dense3_bias);
    }
    if (mask.dense4) {
        step(params.dense4_weights, grads.dense4_weights);
        step(params.dense4_bias, grads.dense4_bias);
    }
    if (mask.number_head) {
        step(params.number_weights, grads.number_weights);
        step(params.number_bias, grads.number_bias);
    }
    if (mask.gesture_head) {
        step(params.gesture_weights, grads.gesture_weights);
        step(params.gesture_bias, grads.gesture_bias);
    }
}

void sequence_backward(NetworkParams& params, const TrajectoryCache& cache,
                       std::span<const StepTargets> targets, HeadRates rates,
                       const TrainedMask& mask) {
    Gradients grads = Gradients::zeros(params.shape);
    accumulate_sequence_gradients(params, cache, targets, rates, grads);
    if (!grads.all_finite())
        throw std::runtime_error("sequence_backward: non-finite gradient (exploding activations)");
    apply_gradients(params, grads, mask);
}

} // namespace countsim
