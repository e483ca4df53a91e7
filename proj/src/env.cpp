#include "maskagent/env.hpp"

#include <random>
#include <string>

#include "maskagent/error.hpp"

namespace maskagent {

std::string_view to_string(StopReason reason) {
    switch (reason) {
        case StopReason::running: return "running";
        case StopReason::reached_tau_stop: return "reached_tau_stop";
        case StopReason::max_steps: return "max_steps";
        case StopReason::converged: return "converged";
        case StopReason::low_impact: return "low_impact";
        case StopReason::policy_exhausted: return "policy_exhausted";
        case StopReason::failed: return "failed";
    }
    return "unknown";
}

StopReason parse_stop_reason(std::string_view text) {
    for (auto r : {StopReason::running, StopReason::reached_tau_stop, StopReason::max_steps,
                   StopReason::converged, StopReason::low_impact, StopReason::policy_exhausted,
                   StopReason::failed}) {
        if (to_string(r) == text) return r;
    }
    throw FormatError("unknown stop reason '" + std::string(text) + "'");
}

void EnvConfig::validate() const {
    if (max_steps < 1) throw InvalidArgument("max_steps must be >= 1");
    if (!(tau_stop >= 0.0 && tau_stop <= 1.0)) throw InvalidArgument("tau_stop must be in [0,1]");
    if (!(tau_diff >= 0.0 && tau_diff <= 1.0)) throw InvalidArgument("tau_diff must be in [0,1]");
}

double reward(const BitMask& mask, const BitMask& target) { return iou(mask, target); }

namespace {

std::vector<Action> clicks_of(const std::vector<Action>& history) {
    std::vector<Action> clicks;
    clicks.reserve(history.size());
    for (const auto& a : history)
        if (a.is_click()) clicks.push_back(a);
    return clicks;
}

std::optional<NormBox> active_box(const EpisodeState& state, const Segmenter& segmenter) {
    if (!segmenter.supports_box()) return std::nullopt;
    for (auto it = state.history.rbegin(); it != state.history.rend(); ++it)
        if (!it->is_click()) return it->corners();
    return state.init_box;
}

void require_shape(const BitMask& mask, const Task& task) {
    if (mask.width() != task.image.width || mask.height() != task.image.height) {
        throw DimensionMismatch("segmenter returned a mask of the wrong size for task " + task.id);
    }
}

}  // namespace

EpisodeState reset(const Task& task, const InitSpec& init, const Segmenter& segmenter) {
    task.validate();
    const int w = task.image.width;
    const int h = task.image.height;
    EpisodeState state;
    state.mask = BitMask(w, h);
    if (const auto* b = std::get_if<InitFromBox>(&init)) {
        state.mask = box_raster(b->box, w, h);
        state.init_box = b->box;
    } else if (const auto* r = std::get_if<InitRandomClicks>(&init)) {
        if (r->n_pos < 0 || r->n_neg < 0) throw InvalidArgument("random init counts must be >= 0");
        const BitMask bounds = box_raster(bbox(task.target), w, h);
        int x0 = w, y0 = h, x1 = 0, y1 = 0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (bounds.at(x, y)) {
                    x0 = std::min(x0, x);
                    y0 = std::min(y0, y);
                    x1 = std::max(x1, x);
                    y1 = std::max(y1, y);
                }
        std::mt19937_64 rng(r->seed);
        std::uniform_int_distribution<int> px(x0, x1);
        std::uniform_int_distribution<int> py(y0, y1);
        for (int i = 0; i < r->n_pos + r->n_neg; ++i) {
            const Pixel p{px(rng), py(rng)};
            state.history.push_back(Action::click(i < r->n_pos, pixel_to_norm(p, w, h)));
        }
        state.mask = segmenter.segment(task, state.history, std::nullopt);
        require_shape(state.mask, task);
    }
    return state;
}

BitMask predict_mask(const EpisodeState& state, const Action& action, const Task& task,
                     const Segmenter& segmenter) {
    EpisodeState next = state;
    next.history.push_back(action);
    const auto clicks = clicks_of(next.history);
    BitMask mask = segmenter.segment(task, clicks, active_box(next, segmenter));
    require_shape(mask, task);
    return mask;
}

StepResult step(const EpisodeState& state, const Action& action, const Task& task,
                const Segmenter& segmenter, const EnvConfig& config) {
    if (state.finished) throw InvalidArgument("step on a finished episode");
    if (state.step >= config.max_steps) throw InvalidArgument("step budget exhausted");
    if (!state.mask.same_shape(task.target)) throw DimensionMismatch("state mask does not match task");

    StepResult out;
    out.state = state;
    out.state.mask = predict_mask(state, action, task, segmenter);
    out.state.history.push_back(action);
    out.state.step = state.step + 1;
    out.reward = reward(out.state.mask, task.target);
    if (out.reward >= config.tau_stop) {
        out.stop_reason = StopReason::reached_tau_stop;
    } else if (out.state.step >= config.max_steps) {
        out.stop_reason = StopReason::max_steps;
    }
    out.done = out.stop_reason != StopReason::running;
    out.state.finished = out.done;
    out.state.stop_reason = out.stop_reason;
    return out;
}

}  // namespace maskagent
